#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyaforge/degree_set.hpp"
#include "polyaforge/tree.hpp"

namespace polyaforge {

using BigInt = boost::multiprecision::cpp_int;

class IntegralityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Series { A, S, E, V, Fpointed, F };

std::string to_string(Series s);

/// coeffs[n] for n = 0..N.
struct CoeffTable {
  Series series_id = Series::A;
  std::vector<BigInt> coeffs;

  [[nodiscard]] const BigInt& operator[](std::size_t n) const { return coeffs.at(n); }
  [[nodiscard]] std::size_t max_n() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

/// [z^n] Z_SET_Lambda(A(z), A(z^2), ...) for n = 0..N.
struct SetLayerTable {
  DegreeSet lambda;
  std::vector<BigInt> coeffs;
};

/// Multisets of trees counted by total size and number of elements. Element
/// counts below `cap` are exact; counts >= cap share the last bucket. Any
/// restriction whose membership is constant from `cap` on can be read off.
class MultisetCounts {
 public:
  MultisetCounts(int cap, std::size_t max_total) : cap_(cap), table_(cap + 1, std::vector<BigInt>(max_total + 1)) {
    table_[0][0] = 1;
  }

  /// Adds the a_s tree types of size s. Sizes must be added in increasing
  /// order; after adding size s every total <= s is final.
  void add_size(std::size_t s, const BigInt& a_s);

  [[nodiscard]] BigInt restricted(const DegreeSet& lambda, std::size_t total) const;
  [[nodiscard]] std::vector<BigInt> restricted_series(const DegreeSet& lambda) const;

  [[nodiscard]] int cap() const { return cap_; }
  [[nodiscard]] std::size_t max_total() const { return table_[0].size() - 1; }

 private:
  void check_restriction(const DegreeSet& lambda) const;

  int cap_;
  std::vector<std::vector<BigInt>> table_;  // [count bucket][total size]
};

/// Rooted trees with all outdegrees in omega_star, a[n] for n = 0..N.
CoeffTable rooted_counts(const DegreeSet& omega_star, std::size_t N);

SetLayerTable set_layer(const CoeffTable& a, const DegreeSet& lambda, std::size_t N);

/// All series of the cycle-pointing decomposition for one degree set.
/// f[0] = f[1] = 1 by convention (empty tree, single vertex); the identity
/// n f_n = s_n + e_n + v_n is meaningful for n >= 2.
struct CyclePointingCounts {
  DegreeRestriction restriction;
  CoeffTable a, s, e, v, pointed, f;

  [[nodiscard]] std::size_t max_n() const { return f.max_n(); }
  [[nodiscard]] bool identity_holds(std::size_t n) const;
};

/// Throws IntegralityViolation if some class sum is not divisible by n.
CyclePointingCounts cycle_pointing_counts(const DegreeSet& omega, std::size_t N);

CoeffTable s_counts(const DegreeSet& omega, std::size_t N);
CoeffTable e_counts(const DegreeSet& omega, std::size_t N);
CoeffTable v_counts(const DegreeSet& omega, std::size_t N);
CoeffTable free_counts(const DegreeSet& omega, std::size_t N);

}  // namespace polyaforge
