#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <set>

#include "polyaforge/enumeration.hpp"
#include "polyaforge/numeric_counts.hpp"
#include "polyaforge/oracle.hpp"
#include "support.hpp"

using namespace polyaforge;

namespace {

const DegreeSet kAll = DegreeSet::parse("1+");
const DegreeSet kCubic = DegreeSet::parse("1,3");
const DegreeSet kOneTwoFour = DegreeSet::parse("1,2,4");

std::vector<BigInt> big(std::initializer_list<int> xs) { return {xs.begin(), xs.end()}; }

std::vector<Tree> free_trees(const DegreeSet& omega, int n) {
  std::set<CanonicalCode> seen;
  std::vector<Tree> out;
  for (const auto& r : all_rooted_trees(n)) {
    auto t = r.unrooted();
    bool ok = true;
    for (std::size_t v = 0; v < t.size(); ++v) ok = ok && omega.contains(t.degree(static_cast<Vertex>(v)));
    if (ok && seen.insert(free_canonical_code(t)).second) out.push_back(t);
  }
  return out;
}

struct OrbitCounts {
  std::size_t s = 0, e = 0, v = 0;
};

// Cycle-pointed trees straight from the definition: cycles of automorphisms,
// identified up to conjugation by automorphisms, classified by the middle of
// the connecting path between consecutive atoms.
OrbitCounts pointed_orbits(const Tree& t) {
  auto auts = testing::all_automorphisms(t);
  std::set<std::vector<Vertex>> canon;
  OrbitCounts out;
  for (const auto& sigma : auts) {
    std::vector<char> done(t.size(), 0);
    for (std::size_t start = 0; start < t.size(); ++start) {
      if (done[start]) continue;
      std::vector<Vertex> cyc;
      for (Vertex v = static_cast<Vertex>(start); !done[v]; v = sigma[v]) {
        done[v] = 1;
        cyc.push_back(v);
      }
      std::vector<Vertex> best;
      for (const auto& phi : auts) {
        for (std::size_t r = 0; r < cyc.size(); ++r) {
          std::vector<Vertex> img;
          for (std::size_t i = 0; i < cyc.size(); ++i) img.push_back(phi[cyc[(r + i) % cyc.size()]]);
          if (best.empty() || img < best) best = img;
        }
      }
      if (!canon.insert(best).second) continue;
      if (cyc.size() == 1) {
        ++out.s;
      } else if (distance(t, cyc[0], cyc[1]) % 2 == 0) {
        ++out.v;
      } else {
        ++out.e;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("degree sets") {
  CHECK(DegreeSet::parse("1,2,3+") == DegreeSet::all_from(1));
  CHECK(DegreeSet::parse("1, 3").to_string() == "1,3");
  CHECK(kAll.shifted(1) == DegreeSet::all_from(0));
  CHECK(kCubic.shifted(1).period() == 2);
  CHECK(kCubic.shifted(3) == DegreeSet::of({0}));
  CHECK(kCubic.shifted(4).empty());
  CHECK(DegreeSet::parse("1,5+").shifted(3) == DegreeSet::all_from(2));
  CHECK_THROWS_AS(DegreeSet::parse("1,x"), InvalidDegreeSet);
  CHECK_THROWS_AS(DegreeSet::parse(""), InvalidDegreeSet);
  CHECK_THROWS_AS(DegreeRestriction::from_omega(DegreeSet::of({1, 2})), InvalidDegreeSet);
  CHECK_THROWS_AS(DegreeRestriction::from_omega(DegreeSet::of({2, 3})), InvalidDegreeSet);
  CHECK_THROWS_AS(rooted_counts(DegreeSet::of({1, 2}), 5), InvalidDegreeSet);
  CHECK_THROWS_AS(rooted_counts(DegreeSet::of({0, 1}), 5), InvalidDegreeSet);
  auto r = DegreeRestriction::from_omega(kCubic);
  CHECK(r.size_admissible(1));
  CHECK(r.size_admissible(10));
  CHECK_FALSE(r.size_admissible(9));
}

TEST_CASE("rooted counts") {
  auto a = rooted_counts(DegreeSet::all_from(0), 10);
  CHECK(std::vector<BigInt>(a.coeffs.begin() + 1, a.coeffs.end()) == big({1, 1, 2, 4, 9, 20, 48, 115, 286, 719}));
  for (int n = 1; n <= 12; ++n) {
    auto full = rooted_counts(DegreeSet::all_from(0), 12);
    CHECK(full[n] == all_rooted_trees(n).size());
  }

  auto binary = rooted_counts(DegreeSet::of({0, 2}), 9);
  CHECK(binary[1] == 1);
  CHECK(binary[3] == 1);
  CHECK(binary[5] == 1);
  CHECK(binary[7] == 2);
  CHECK(binary[9] == 3);
  for (int n = 2; n <= 8; n += 2) CHECK(binary[n] == 0);

  // a_5 = total number of rootings of the 3 free trees on 5 vertices
  std::size_t rootings = 0;
  auto trees = free_trees(kAll, 5);
  CHECK(trees.size() == 3);
  for (const auto& t : trees) {
    std::set<CanonicalCode> r;
    for (Vertex v = 0; v < 5; ++v) r.insert(canonical_code(root_at(t, v)));
    rootings += r.size();
  }
  CHECK(rootings == 9);
  CHECK(a[5] == 9);
}

TEST_CASE("set layers") {
  auto a = rooted_counts(DegreeSet::all_from(0), 10);
  auto empty_only = set_layer(a, DegreeSet::of({0}), 6);
  CHECK(empty_only.coeffs == big({1, 0, 0, 0, 0, 0, 0}));

  CoeffTable atom{Series::A, big({0, 1, 0, 0, 0, 0, 0, 0, 0})};
  auto geometric = set_layer(atom, DegreeSet::all_from(0), 8);
  for (const auto& c : geometric.coeffs) CHECK(c == 1);

  auto pairs = set_layer(a, DegreeSet::of({2}), 8);
  CHECK(pairs.coeffs[0] == 0);
  CHECK(pairs.coeffs[2] == 1);
  CHECK(pairs.coeffs[3] == 1);
  CHECK(pairs.coeffs[4] == 3);
  // unordered pairs of enumerated rooted trees
  for (int N = 2; N <= 8; ++N) {
    std::size_t count = 0;
    for (int i = 1; 2 * i <= N; ++i) {
      std::size_t x = all_rooted_trees(i).size(), y = all_rooted_trees(N - i).size();
      count += (2 * i == N) ? x * (x + 1) / 2 : x * y;
    }
    CHECK(pairs.coeffs[N] == count);
  }
  CHECK(set_layer(a, DegreeSet::all_from(1), 5).coeffs[0] == 0);
  CHECK_THROWS(set_layer(a, DegreeSet::of({2}), 11));
}

TEST_CASE("class counts") {
  auto all = cycle_pointing_counts(kAll, 10);
  CHECK(all.s[6] == 20);
  CHECK(all.s[6] == all.a[6]);
  CHECK(all.s[1] == 0);
  CHECK(all.e[6] == 6);
  CHECK(all.e[2] == 1);
  CHECK(all.e[7] == 0);
  CHECK(all.v[6] == 10);
  CHECK(all.v[1] == 0);
  CHECK(all.f[5] == 3);
  CHECK(all.f.coeffs == big({1, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106}));
  CHECK(all.pointed[6] == 36);

  auto cubic = cycle_pointing_counts(kCubic, 10);
  CHECK(cubic.s[4] == 2);
  // the star K_{1,3} carries a 2-cycle and a 3-cycle of leaves
  CHECK(cubic.v[4] == 2);
  std::vector<BigInt> even;
  for (int n = 2; n <= 10; n += 2) even.push_back(cubic.f[n]);
  CHECK(even == big({1, 1, 1, 1, 2}));
  for (int n = 3; n <= 9; n += 2) CHECK(cubic.f[n] == 0);
  for (int n = 2; n <= 10; n += 2) CHECK(cubic.a[n] == 0);

  CHECK(s_counts(kAll, 6)[6] == 20);
  CHECK(e_counts(kAll, 6)[6] == 6);
  CHECK(v_counts(kAll, 6)[6] == 10);
  CHECK(free_counts(kAll, 6)[6] == 6);
}

TEST_CASE("cycle-pointing identity up to n = 200") {
  for (const auto& omega : {kAll, kCubic, kOneTwoFour, DegreeSet::parse("1,4,5+"), DegreeSet::parse("1,3,4")}) {
    auto c = cycle_pointing_counts(omega, 200);
    const int d = c.restriction.period;
    for (std::size_t n = 2; n <= 200; ++n) {
      REQUIRE(c.identity_holds(n));
      if ((n - 2) % d != 0) REQUIRE(c.f[n] == 0);
      if ((n - 1) % d != 0) REQUIRE(c.a[n] == 0);
    }
  }
}

TEST_CASE("oracle equivalence n <= 12") {
  for (const auto& omega : {kAll, kCubic, kOneTwoFour}) {
    auto c = cycle_pointing_counts(omega, 12);
    for (int n = 1; n <= 12; ++n) {
      CAPTURE(omega.to_string());
      CAPTURE(n);
      CHECK(c.a[n] == brute_force_enumerate(omega, n, ObjectKind::rooted).size());
      CHECK(c.f[n] == brute_force_enumerate(omega, n, ObjectKind::free).size());
      CHECK(c.s[n] == brute_force_enumerate(omega, n, ObjectKind::S).size());
      CHECK(c.e[n] == brute_force_enumerate(omega, n, ObjectKind::E).size());
      CHECK(c.v[n] == brute_force_enumerate(omega, n, ObjectKind::V).size());
    }
  }
}

TEST_CASE("brute force details") {
  CHECK(brute_force_enumerate(kAll, 1, ObjectKind::free).size() == 1);
  CHECK(brute_force_enumerate(kAll, 6, ObjectKind::free).size() == 6);
  CHECK(brute_force_enumerate(kAll, 6, ObjectKind::E).size() == 6);
  CHECK_THROWS_AS(brute_force_enumerate(kAll, 15, ObjectKind::free), SizeLimitExceeded);
  // every rooted tree has exactly as many pointings as vertices
  for (int n = 1; n <= 9; ++n) {
    for (const auto& t : all_rooted_trees(n)) CHECK(rooted_pointings(t).size() == t.size());
  }
}

TEST_CASE("automorphism-orbit oracle agrees with the class counts") {
  for (const auto& omega : {kAll, kCubic, kOneTwoFour}) {
    auto c = cycle_pointing_counts(omega, 8);
    for (int n = 2; n <= 8; ++n) {
      OrbitCounts total;
      for (const auto& t : free_trees(omega, n)) {
        auto o = pointed_orbits(t);
        REQUIRE(o.s + o.e + o.v == static_cast<std::size_t>(n));
        total.s += o.s;
        total.e += o.e;
        total.v += o.v;
      }
      CAPTURE(omega.to_string());
      CAPTURE(n);
      CHECK(c.s[n] == total.s);
      CHECK(c.e[n] == total.e);
      CHECK(c.v[n] == total.v);
    }
  }
}

TEST_CASE("numeric counts match exact counts") {
  for (const auto& omega : {kAll, kCubic, kOneTwoFour}) {
    auto exact = cycle_pointing_counts(omega, 60);
    NumericCounts num(omega.shifted(1), omega.cap(), 60);
    for (std::size_t n = 1; n <= 60; ++n) {
      long double x = exact.a[n].convert_to<long double>();
      CHECK(std::fabs(num.a(n) - x) <= 1e-15L * x);
      long double s = exact.s[n].convert_to<long double>();
      CHECK(std::fabs(num.total(omega, n - 1) - s) <= 1e-15L * s);
    }
  }
}

TEST_CASE("radius of convergence") {
  auto otter = radius_of_convergence(DegreeSet::all_from(0), 1e-15L);
  CHECK(std::fabs(static_cast<double>(otter.rho) - 0.3383218568992076) < 1e-12);
  CHECK(otter.s[1] >= otter.rho);
  CHECK(std::isfinite(static_cast<double>(otter.s[1])));
  for (std::size_t i = 2; i <= otter.i_max; ++i) CHECK(otter.s[i] < otter.s[i - 1]);

  // ratio oracle: a_n / a_{n+d} (n/(n+d))^{3/2} = rho^d (1 + O(n^-2)), Richardson on two sizes
  auto ratio_oracle = [](const DegreeSet& os, int d, int n1, int n2) {
    auto a = rooted_counts(os, n2 + d);
    auto est = [&](int n) {
      long double r = a[n].convert_to<long double>() / a[n + d].convert_to<long double>();
      return r * std::pow(static_cast<long double>(n) / (n + d), 1.5L);
    };
    long double e1 = est(n1), e2 = est(n2);
    long double x1 = 1.0L / (n1 * static_cast<long double>(n1)), x2 = 1.0L / (n2 * static_cast<long double>(n2));
    return static_cast<double>((e2 * x1 - e1 * x2) / (x1 - x2));
  };
  CHECK(std::fabs(ratio_oracle(DegreeSet::all_from(0), 1, 300, 400) - static_cast<double>(otter.rho)) < 1e-7);

  auto binary = radius_of_convergence(DegreeSet::of({0, 2}), 1e-15L);
  const double rho2 = static_cast<double>(binary.rho * binary.rho);
  CHECK(std::fabs(rho2 - 0.4026975) < 1e-7);
  CHECK(std::fabs(ratio_oracle(DegreeSet::of({0, 2}), 2, 301, 401) - rho2) < 1e-7);

  CHECK_THROWS_AS(radius_of_convergence(DegreeSet::all_from(0), 0), std::invalid_argument);
}

TEST_CASE("normalized coefficients settle") {
  auto sing = radius_of_convergence(DegreeSet::all_from(0), 1e-15L);
  auto a = rooted_counts(DegreeSet::all_from(0), 400);
  auto norm = [&](int n) {
    return a[n].convert_to<long double>() * std::pow(sing.rho, static_cast<long double>(n)) *
           std::pow(static_cast<long double>(n), 1.5L);
  };
  CHECK(std::fabs(norm(400) / norm(300) - 1) < 0.01);
}
