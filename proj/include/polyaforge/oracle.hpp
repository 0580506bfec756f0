#pragma once

#include <stdexcept>
#include <vector>

#include "polyaforge/degree_set.hpp"
#include "polyaforge/tree.hpp"

namespace polyaforge {

class SizeLimitExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ObjectKind { rooted, free, S, E, V };

inline constexpr int kBruteForceMaxN = 14;

/// All rooted trees with n vertices (Beyer-Hedetniemi level sequences), each
/// isomorphism class exactly once.
std::vector<RootedTree> all_rooted_trees(int n);

/// Distinct cycle pointings of a rooted tree that fix the root, encoded
/// canonically. A pointing is either the root itself or a cycle spread over
/// k copies of one child class combined with a pointing of that child.
std::vector<std::vector<std::uint32_t>> rooted_pointings(const RootedTree& t);

/// Exhaustive, duplicate-free codes of all objects of the given kind with
/// n vertices and all degrees in omega (outdegrees in omega - 1 for rooted).
/// Pointed kinds use a tagged encoding: S = [1, rooted code], E = [2, half
/// code, pointing], V = [3, rooted code, child code, k, pointing].
std::vector<CanonicalCode> brute_force_enumerate(const DegreeSet& omega, int n, ObjectKind kind);

}  // namespace polyaforge
