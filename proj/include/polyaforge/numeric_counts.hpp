#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "polyaforge/degree_set.hpp"

namespace polyaforge {

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point companion of the exact multiset DP, with the recurrences
/// needed to draw uniform multisets of trees by size:
///
///   exact(c, N)    multisets of exactly c trees, c E_c[N] = sum_j sum_m a_m E_{c-j}[N - jm]
///   at_least(s, N) multisets of at least s trees,
///                  N H_s[N] = sum_j sum_m m a_m H_{max(s-j,0)}[N - jm]
///
/// Values are unscaled long doubles; construction throws std::overflow_error
/// if a count leaves the representable range (around N = 9000 for the
/// fastest-growing degree sets).
class NumericCounts {
 public:
  NumericCounts(DegreeSet omega_star, int cap, std::size_t max_n);

  [[nodiscard]] const DegreeSet& omega_star() const { return omega_star_; }
  [[nodiscard]] int cap() const { return cap_; }
  [[nodiscard]] std::size_t max_n() const { return a_.size() - 1; }

  [[nodiscard]] long double a(std::size_t m) const { return a_[m]; }
  [[nodiscard]] const std::vector<long double>& a_series() const { return a_; }
  [[nodiscard]] long double exact(int c, std::size_t total) const { return exact_[c][total]; }
  [[nodiscard]] long double at_least(int s, std::size_t total) const { return at_least_[s][total]; }
  /// Sum over m | k with k/m >= s of m a_m.
  [[nodiscard]] long double pointed_weight(int s, std::size_t k) const { return b_[s][k]; }
  [[nodiscard]] const std::vector<std::size_t>& divisors(std::size_t k) const { return divisors_[k]; }

  /// Multisets with element count in lambda; lambda must be resolvable at cap().
  [[nodiscard]] long double total(const DegreeSet& lambda, std::size_t n) const;

 private:
  void fill_row(std::size_t N);
  void add_tree_size(std::size_t m);

  DegreeSet omega_star_;
  int cap_;
  std::vector<long double> a_;
  std::vector<std::vector<long double>> exact_;     // c = 0..cap-1
  std::vector<std::vector<long double>> at_least_;  // s = 0..cap
  std::vector<std::vector<long double>> b_;         // s = 0..cap
  std::vector<std::vector<std::size_t>> divisors_;
};

/// Critical point of A = z SET_{omega_star}(A) and the evaluated series.
struct Singularity {
  long double rho = 0;
  /// s[i] = A(rho^i), t[i] = A°(rho^i) = sum m a_m rho^{im} for i = 1..i_max
  /// (index 0 unused; t[1] is infinite).
  std::vector<long double> s, t;
  std::size_t i_max = 0;
  /// Numeric rooted counts used for the inner series (a[m], m < size()).
  std::vector<long double> a;
};

/// Z_SET restricted to lambda at (y, s_2, s_3, ...): sum_{d in lambda} P_d with
/// P_d = (1/d) sum_{j=1..d} s_j P_{d-j}. `s[j]` for j >= 2; s[1] is replaced by y.
long double set_cycle_index(const DegreeSet& lambda, long double y, const std::vector<long double>& s);

/// Solves y = Phi(y, z), dPhi/dy = 1 with Phi(y, z) = z Z_SET_{omega_star}(y, A(z^2), ...)
/// by nested bisection. The returned rho is the largest feasible z found, and
/// s[1] is the exact smallest fixed point at that z.
Singularity radius_of_convergence(const DegreeSet& omega_star, long double precision);

}  // namespace polyaforge
