#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polyaforge {

class InvalidDegreeSet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A set of non-negative integers given by a finite part plus an optional
/// cofinite tail {t, t+1, ...}. Used both for vertex-degree sets (Omega) and
/// for child-count restrictions (Omega* and its shifts).
///
/// The representation is normalized on construction: finite elements covered
/// by the tail are dropped and the tail start is lowered as far as the finite
/// part allows, so equality is semantic.
class DegreeSet {
 public:
  DegreeSet() = default;
  DegreeSet(std::vector<int> finite, std::optional<int> tail_min);

  static DegreeSet all_from(int t) { return DegreeSet({}, t); }
  static DegreeSet of(std::vector<int> finite) { return DegreeSet(std::move(finite), std::nullopt); }

  /// Parses "1,3" (finite) or "1,2,3+" (tail) syntax.
  static DegreeSet parse(std::string_view text);

  [[nodiscard]] bool contains(long long k) const;
  [[nodiscard]] bool empty() const { return finite_.empty() && !tail_; }
  [[nodiscard]] bool is_cofinite() const { return tail_.has_value(); }

  [[nodiscard]] const std::vector<int>& finite_part() const { return finite_; }
  [[nodiscard]] const std::optional<int>& tail_min() const { return tail_; }

  /// Child counts are tracked exactly below cap() and saturate at cap().
  /// For a finite set cap() = max + 1 (a saturated count is excluded); for a
  /// cofinite set cap() = tail_min (a saturated count is included).
  [[nodiscard]] int cap() const;
  [[nodiscard]] bool contains_capped(int c) const;

  /// Largest element of a finite set; throws for cofinite sets.
  [[nodiscard]] int max_element() const;

  /// {x - shift : x in this, x >= shift}.
  [[nodiscard]] DegreeSet shifted(int shift) const;

  /// gcd of the nonzero elements (1 for cofinite sets, 0 if there are none).
  [[nodiscard]] int period() const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const DegreeSet&, const DegreeSet&) = default;

 private:
  std::vector<int> finite_;
  std::optional<int> tail_;
};

/// A vertex-degree set together with its derived quantities.
struct DegreeRestriction {
  DegreeSet omega;
  DegreeSet omega_star;  // omega - 1: allowed outdegrees in rooted trees
  int period = 1;        // gcd of nonzero elements of omega_star

  /// Requires 1 in omega and some k >= 3 in omega.
  static DegreeRestriction from_omega(DegreeSet omega);

  /// Whether unrooted trees with n vertices can exist (n = 1 or n == 2 mod period).
  [[nodiscard]] bool size_admissible(long long n) const;
};

/// Validates an outdegree set: contains 0 and some k >= 2.
void validate_omega_star(const DegreeSet& omega_star);

}  // namespace polyaforge
