#include "polyaforge/numeric_counts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace polyaforge {

NumericCounts::NumericCounts(DegreeSet omega_star, int cap, std::size_t max_n)
    : omega_star_(std::move(omega_star)), cap_(cap) {
  validate_omega_star(omega_star_);
  if (cap_ < omega_star_.cap()) throw std::invalid_argument("count cap below the outdegree set's cap");
  if (max_n < 1) throw std::invalid_argument("max_n must be at least 1");
  const std::size_t len = max_n + 1;
  a_.assign(len, 0.0L);
  exact_.assign(cap_, std::vector<long double>(len, 0.0L));
  at_least_.assign(cap_ + 1, std::vector<long double>(len, 0.0L));
  b_.assign(cap_ + 1, std::vector<long double>(len, 0.0L));
  divisors_.assign(len, {});
  for (std::size_t m = 1; m < len; ++m) {
    for (std::size_t k = m; k < len; k += m) divisors_[k].push_back(m);
  }
  for (std::size_t N = 0; N <= max_n; ++N) {
    fill_row(N);
    if (N + 1 <= max_n) {
      a_[N + 1] = total(omega_star_, N);
      if (!std::isfinite(a_[N + 1])) {
        throw std::overflow_error("rooted count a_" + std::to_string(N + 1) + " exceeds long double range");
      }
      add_tree_size(N + 1);
    }
  }
}

void NumericCounts::add_tree_size(std::size_t m) {
  const long double w = static_cast<long double>(m) * a_[m];
  if (w == 0) return;
  for (std::size_t j = 1; j * m <= max_n(); ++j) {
    for (int s = 0; s <= cap_ && static_cast<std::size_t>(s) <= j; ++s) b_[s][j * m] += w;
  }
}

void NumericCounts::fill_row(std::size_t N) {
  if (N == 0) {
    if (cap_ > 0) exact_[0][0] = 1;
    at_least_[0][0] = 1;
    return;
  }
  for (int c = 1; c < cap_; ++c) {
    long double sum = 0;
    for (int j = 1; j <= c; ++j) {
      for (std::size_t m = 1; j * m <= N; ++m) sum += a_[m] * exact_[c - j][N - j * m];
    }
    exact_[c][N] = sum / c;
  }
  const auto& h0 = at_least_[0];
  for (int s = 0; s <= cap_; ++s) {
    long double sum = 0;
    for (std::size_t k = 1; k <= N; ++k) sum += b_[s][k] * h0[N - k];
    for (int j = 1; j < s; ++j) {
      for (std::size_t m = 1; j * m <= N; ++m) {
        sum += static_cast<long double>(m) * a_[m] * at_least_[s - j][N - j * m];
      }
    }
    at_least_[s][N] = sum / static_cast<long double>(N);
    if (!std::isfinite(at_least_[s][N])) {
      throw std::overflow_error("multiset count at total " + std::to_string(N) + " exceeds long double range");
    }
  }
}

long double NumericCounts::total(const DegreeSet& lambda, std::size_t n) const {
  long double sum = 0;
  for (int c : lambda.finite_part()) {
    if (c >= cap_) {
      throw std::invalid_argument("restriction " + lambda.to_string() + " not resolvable with count cap " +
                                  std::to_string(cap_));
    }
    sum += exact_[c][n];
  }
  if (lambda.is_cofinite()) {
    int t = *lambda.tail_min();
    if (t > cap_) throw std::invalid_argument("restriction tail beyond count cap");
    sum += at_least_[t][n];
  }
  return sum;
}

long double set_cycle_index(const DegreeSet& lambda, long double y, const std::vector<long double>& s) {
  auto s_at = [&](std::size_t j) { return j == 1 ? y : (j < s.size() ? s[j] : 0.0L); };
  int top = lambda.is_cofinite() ? *lambda.tail_min() - 1
                                 : (lambda.finite_part().empty() ? -1 : lambda.finite_part().back());
  std::vector<long double> P(std::max(top, 0) + 1, 0.0L);
  P[0] = 1;
  for (int d = 1; d <= top; ++d) {
    long double acc = 0;
    for (int j = 1; j <= d; ++j) acc += s_at(j) * P[d - j];
    P[d] = acc / d;
  }
  long double z = 0;
  for (int d : lambda.finite_part()) z += P[d];
  if (lambda.is_cofinite()) {
    long double log_all = y;
    for (std::size_t j = 2; j < s.size(); ++j) log_all += s[j] / static_cast<long double>(j);
    long double below = 0;
    for (int d = 0; d <= top; ++d) below += P[d];
    z += std::max(std::exp(log_all) - below, 0.0L);
  }
  return z;
}

namespace {

constexpr long double kInnerCutoff = 1e-30L;

struct Solver {
  const DegreeSet& omega_star;
  DegreeSet derivative_set;
  const std::vector<long double>& a;

  // A(z^j) for j = 2.. until z^j is negligible; flags truncation failure.
  std::vector<long double> inner(long double z, bool& truncated) const {
    std::vector<long double> s{0.0L, 0.0L};
    truncated = false;
    for (std::size_t j = 2;; ++j) {
      long double x = std::pow(z, static_cast<long double>(j));
      if (x < kInnerCutoff) break;
      long double sum = 0, term = 0, xm = 1;
      for (std::size_t m = 1; m < a.size(); ++m) {
        xm *= x;
        term = a[m] * xm;
        sum += term;
        if (!std::isfinite(sum)) break;
      }
      if (!std::isfinite(sum) || term > kInnerCutoff * sum) truncated = true;
      s.push_back(sum);
      if (!std::isfinite(sum)) break;
    }
    return s;
  }

  long double phi(long double y, long double z, const std::vector<long double>& s) const {
    return z * set_cycle_index(omega_star, y, s);
  }
  long double phi_y(long double y, long double z, const std::vector<long double>& s) const {
    return z * set_cycle_index(derivative_set, y, s);
  }

  // y* with phi_y(y*) = 1, or nullopt-like negative when none exists (z too big).
  long double tangent_point(long double z, const std::vector<long double>& s) const {
    if (!(phi_y(0, z, s) < 1)) return -1;
    long double lo = 0, hi = 1;
    while (phi_y(hi, z, s) < 1) {
      lo = hi;
      hi *= 2;
      if (hi > 1e30L) throw NonConvergence("derivative of the tree equation stays below 1");
    }
    for (int it = 0; it < 200 && hi - lo > std::numeric_limits<long double>::epsilon() * hi; ++it) {
      long double mid = (lo + hi) / 2;
      (phi_y(mid, z, s) < 1 ? lo : hi) = mid;
    }
    return lo;
  }

  bool feasible(long double z, bool& truncated) const {
    auto s = inner(z, truncated);
    for (long double v : s) {
      if (!std::isfinite(v)) return false;
    }
    long double y = tangent_point(z, s);
    if (y < 0) return false;
    return phi(y, z, s) - y <= 0;
  }
};

}  // namespace

Singularity radius_of_convergence(const DegreeSet& omega_star, long double precision) {
  validate_omega_star(omega_star);
  if (!(precision > 0)) throw std::invalid_argument("precision must be positive");

  for (std::size_t terms = 256; terms <= (1U << 13); terms *= 2) {
    NumericCounts counts(omega_star, omega_star.cap(), terms);
    Solver solver{omega_star, omega_star.shifted(1), counts.a_series()};

    long double lo = 0, hi = 1;
    bool truncated = false;
    bool truncated_at_lo = false;
    for (int it = 0; it < 400 && hi - lo > precision / 4; ++it) {
      long double mid = (lo + hi) / 2;
      if (solver.feasible(mid, truncated)) {
        lo = mid;
        truncated_at_lo = truncated;
      } else {
        hi = mid;
      }
    }
    if (hi - lo > precision) throw NonConvergence("bisection for rho did not reach the requested precision");
    if (truncated_at_lo) continue;

    Singularity out;
    out.rho = lo;
    auto s = solver.inner(lo, truncated);
    long double ystar = solver.tangent_point(lo, s);
    long double ylo = 0, yhi = ystar;
    for (int it = 0; it < 300 && yhi - ylo > std::numeric_limits<long double>::epsilon() * yhi; ++it) {
      long double mid = (ylo + yhi) / 2;
      (solver.phi(mid, lo, s) - mid > 0 ? ylo : yhi) = mid;
    }
    const long double a_rho = yhi;

    out.a = counts.a_series();
    out.s = {0.0L, a_rho};
    out.t = {0.0L, std::numeric_limits<long double>::infinity()};
    for (std::size_t i = 2;; ++i) {
      long double x = std::pow(lo, static_cast<long double>(i));
      if (x * a_rho < 1e-15L) break;
      long double sv = 0, tv = 0, xm = 1;
      for (std::size_t m = 1; m < out.a.size(); ++m) {
        xm *= x;
        sv += out.a[m] * xm;
        tv += static_cast<long double>(m) * out.a[m] * xm;
      }
      out.s.push_back(sv);
      out.t.push_back(tv);
    }
    out.i_max = out.s.size() - 1;
    return out;
  }
  throw NonConvergence("inner series A(z^2) did not converge within the coefficient budget");
}

}  // namespace polyaforge
