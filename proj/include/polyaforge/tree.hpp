#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace polyaforge {

using Vertex = std::int32_t;

class InvalidTree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unrooted tree on vertices 0..n-1.
class Tree {
 public:
  Tree() : adjacency_(1) {}
  explicit Tree(std::vector<std::vector<Vertex>> adjacency);

  /// Builds a tree on n vertices from n-1 edges; throws InvalidTree unless
  /// the edges form a tree.
  static Tree from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges);

  [[nodiscard]] std::size_t size() const { return adjacency_.size(); }
  [[nodiscard]] const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }
  [[nodiscard]] std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  [[nodiscard]] const std::vector<std::vector<Vertex>>& adjacency() const { return adjacency_; }

  /// Edges (u, v) with u < v, sorted.
  [[nodiscard]] std::vector<std::pair<Vertex, Vertex>> edges() const;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
};

/// Rooted tree with root 0; parent[0] == -1.
class RootedTree {
 public:
  RootedTree() : parent_{-1}, children_(1) {}
  explicit RootedTree(std::vector<Vertex> parent);

  [[nodiscard]] std::size_t size() const { return parent_.size(); }
  [[nodiscard]] Vertex parent(Vertex v) const { return parent_.at(v); }
  [[nodiscard]] const std::vector<Vertex>& parents() const { return parent_; }
  [[nodiscard]] const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }
  [[nodiscard]] std::size_t outdegree(Vertex v) const { return children_.at(v).size(); }

  [[nodiscard]] Tree unrooted() const;
  [[nodiscard]] std::size_t height() const;

 private:
  std::vector<Vertex> parent_;
  std::vector<std::vector<Vertex>> children_;
};

/// Re-roots an unrooted tree at v (v becomes vertex 0, BFS order).
RootedTree root_at(const Tree& t, Vertex v);

/// Isomorphism-invariant encoding. For rooted trees this is the preorder
/// sequence of outdegrees with children visited in decreasing code order.
struct CanonicalCode {
  std::vector<std::uint32_t> code;

  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;

  [[nodiscard]] std::string to_string() const;  // "2.0.1.0"
  static CanonicalCode from_string(const std::string& s);
};

struct CanonicalCodeHash {
  std::size_t operator()(const CanonicalCode& c) const noexcept;
};

CanonicalCode canonical_code(const RootedTree& t);

/// Canonical codes of every rooted subtree (small trees only: memory is the
/// sum of subtree sizes).
std::vector<CanonicalCode> subtree_codes(const RootedTree& t);

/// Rooted at the center; a bicentral tree is the concatenation of the two
/// sorted half codes (distinguishable since its outdegree sum is n-2).
CanonicalCode free_canonical_code(const Tree& t);

/// Rebuilds the canonically ordered rooted tree from a rooted code.
RootedTree tree_from_code(const CanonicalCode& c);

std::vector<std::size_t> bfs_distances(const Tree& t, Vertex source);
std::size_t distance(const Tree& t, Vertex u, Vertex v);
std::size_t diameter(const Tree& t);
std::vector<Vertex> centers(const Tree& t);
RootedTree k_neighborhood(const Tree& t, Vertex v, std::size_t k);
std::map<std::size_t, std::size_t> degree_histogram(const Tree& t);

/// Relabels vertices by a permutation: vertex v becomes perm[v].
Tree relabel(const Tree& t, const std::vector<Vertex>& perm);

// NDJSON forms: {"n":..,"parent":[-1,...]} and {"n":..,"edges":[[u,v],...]}.
nlohmann::json to_json(const RootedTree& t);
nlohmann::json to_json(const Tree& t);
RootedTree rooted_from_json(const nlohmann::json& j);
Tree tree_from_json(const nlohmann::json& j);

}  // namespace polyaforge
