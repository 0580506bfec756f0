#include "polyaforge/enumeration.hpp"

#include <algorithm>
#include <map>

namespace polyaforge {

std::string to_string(Series s) {
  switch (s) {
    case Series::A: return "A";
    case Series::S: return "S";
    case Series::E: return "E";
    case Series::V: return "V";
    case Series::Fpointed: return "Fpointed";
    case Series::F: return "F";
  }
  return "?";
}

void MultisetCounts::add_size(std::size_t s, const BigInt& a_s) {
  if (a_s == 0 || s == 0) return;
  const std::size_t N = max_total();
  if (s > N) return;
  // w[m] = C(a_s + m - 1, m): multisets of m trees drawn from a_s types
  std::vector<BigInt> w(N / s + 1);
  w[0] = 1;
  for (std::size_t m = 1; m < w.size(); ++m) w[m] = w[m - 1] * (a_s + m - 1) / m;

  for (std::size_t n = N; n >= s; --n) {
    for (std::size_t m = 1; m * s <= n; ++m) {
      const std::size_t from = n - m * s;
      for (int c = 0; c <= cap_; ++c) {
        const BigInt& src = table_[c][from];
        if (src == 0) continue;
        int to = std::min<std::size_t>(c + m, cap_);
        table_[to][n] += src * w[m];
      }
    }
  }
}

void MultisetCounts::check_restriction(const DegreeSet& lambda) const {
  bool ok = lambda.is_cofinite() ? *lambda.tail_min() <= cap_
                                 : lambda.finite_part().empty() || lambda.finite_part().back() < cap_;
  if (!ok) {
    throw std::invalid_argument("restriction " + lambda.to_string() + " not resolvable with count cap " +
                                std::to_string(cap_));
  }
}

BigInt MultisetCounts::restricted(const DegreeSet& lambda, std::size_t total) const {
  check_restriction(lambda);
  BigInt sum = 0;
  for (int c = 0; c < cap_; ++c) {
    if (lambda.contains(c)) sum += table_[c].at(total);
  }
  if (lambda.is_cofinite()) sum += table_[cap_].at(total);
  return sum;
}

std::vector<BigInt> MultisetCounts::restricted_series(const DegreeSet& lambda) const {
  std::vector<BigInt> out(max_total() + 1);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = restricted(lambda, n);
  return out;
}

namespace {

// Interleaves tree counts with the multiset table: a_s is read from the
// table at total s - 1 once all smaller sizes are in.
std::vector<BigInt> grow_rooted(const DegreeSet& omega_star, MultisetCounts& table, std::size_t N) {
  std::vector<BigInt> a(N + 1);
  for (std::size_t s = 1; s <= N; ++s) {
    a[s] = table.restricted(omega_star, s - 1);
    table.add_size(s, a[s]);
  }
  return a;
}

}  // namespace

CoeffTable rooted_counts(const DegreeSet& omega_star, std::size_t N) {
  validate_omega_star(omega_star);
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  MultisetCounts table(omega_star.cap(), N);
  return CoeffTable{Series::A, grow_rooted(omega_star, table, N)};
}

SetLayerTable set_layer(const CoeffTable& a, const DegreeSet& lambda, std::size_t N) {
  if (a.max_n() < N) throw std::invalid_argument("rooted table too short for set layer");
  MultisetCounts table(lambda.cap(), N);
  for (std::size_t s = 1; s <= N; ++s) table.add_size(s, a[s]);
  return SetLayerTable{lambda, table.restricted_series(lambda)};
}

bool CyclePointingCounts::identity_holds(std::size_t n) const {
  return BigInt(n) * f[n] == s[n] + e[n] + v[n];
}

CyclePointingCounts cycle_pointing_counts(const DegreeSet& omega, std::size_t N) {
  auto r = DegreeRestriction::from_omega(omega);
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  MultisetCounts table(omega.cap(), N);
  auto a = grow_rooted(r.omega_star, table, N);

  CyclePointingCounts out;
  out.restriction = r;
  out.a = CoeffTable{Series::A, a};
  std::vector<BigInt> s(N + 1), e(N + 1), v(N + 1), pointed(N + 1), f(N + 1);

  for (std::size_t n = 1; n <= N; ++n) s[n] = table.restricted(omega, n - 1);
  for (std::size_t n = 2; n <= N; n += 2) e[n] = BigInt(n / 2) * a[n / 2];

  // v_n = [z^{n-1}] sum_{l>=2} A°(z^l) Z_SET_{omega-l}(A(z), A(z^2), ...)
  std::map<std::string, std::vector<BigInt>> layers;
  for (std::size_t l = 2; l + 1 <= N; ++l) {
    auto lambda = omega.shifted(static_cast<int>(l));
    if (lambda.empty()) break;
    auto [it, fresh] = layers.try_emplace(lambda.to_string());
    if (fresh) it->second = table.restricted_series(lambda);
    const auto& layer = it->second;
    for (std::size_t m = 1; l * m + 1 <= N; ++m) {
      if (a[m] == 0) continue;
      BigInt w = BigInt(m) * a[m];
      for (std::size_t n = l * m + 1; n <= N; ++n) {
        const BigInt& c = layer[n - 1 - l * m];
        if (c != 0) v[n] += w * c;
      }
    }
  }

  f[0] = 1;
  if (N >= 1) f[1] = 1;
  for (std::size_t n = 2; n <= N; ++n) {
    pointed[n] = s[n] + e[n] + v[n];
    BigInt q, rem;
    boost::multiprecision::divide_qr(pointed[n], BigInt(n), q, rem);
    if (rem != 0) {
      throw IntegralityViolation("n = " + std::to_string(n) + " does not divide s_n + e_n + v_n for omega " +
                                 omega.to_string());
    }
    f[n] = q;
  }
  pointed[1] = s[1] + e[1] + v[1];

  out.s = CoeffTable{Series::S, std::move(s)};
  out.e = CoeffTable{Series::E, std::move(e)};
  out.v = CoeffTable{Series::V, std::move(v)};
  out.pointed = CoeffTable{Series::Fpointed, std::move(pointed)};
  out.f = CoeffTable{Series::F, std::move(f)};
  return out;
}

CoeffTable s_counts(const DegreeSet& omega, std::size_t N) { return cycle_pointing_counts(omega, N).s; }
CoeffTable e_counts(const DegreeSet& omega, std::size_t N) { return cycle_pointing_counts(omega, N).e; }
CoeffTable v_counts(const DegreeSet& omega, std::size_t N) { return cycle_pointing_counts(omega, N).v; }
CoeffTable free_counts(const DegreeSet& omega, std::size_t N) { return cycle_pointing_counts(omega, N).f; }

}  // namespace polyaforge
