#include "polyaforge/tree.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

namespace polyaforge {

namespace {

constexpr auto kUnvisited = std::numeric_limits<std::size_t>::max();

void check_vertex(const Tree& t, Vertex v) {
  if (v < 0 || static_cast<std::size_t>(v) >= t.size()) {
    throw std::out_of_range("vertex " + std::to_string(v) + " out of range for tree of size " +
                            std::to_string(t.size()));
  }
}

// BFS from root without crossing to `blocked`; vertices renumbered in BFS order.
RootedTree rooted_component(const Tree& t, Vertex root, Vertex blocked) {
  std::vector<Vertex> index(t.size(), -1);
  std::vector<Vertex> parent{-1};
  std::vector<Vertex> order{root};
  index[root] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    Vertex v = order[head];
    for (Vertex w : t.neighbors(v)) {
      if (w == blocked || index[w] >= 0) continue;
      index[w] = static_cast<Vertex>(order.size());
      order.push_back(w);
      parent.push_back(index[v]);
    }
  }
  return RootedTree(std::move(parent));
}

void append_code(std::vector<std::uint32_t>& out, const std::vector<std::uint32_t>& c) {
  out.insert(out.end(), c.begin(), c.end());
}

}  // namespace

Tree::Tree(std::vector<std::vector<Vertex>> adjacency) : adjacency_(std::move(adjacency)) {
  const std::size_t n = adjacency_.size();
  if (n == 0) throw InvalidTree("a tree has at least one vertex");
  std::size_t half_edges = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto& nb = adjacency_[v];
    for (Vertex w : nb) {
      if (w < 0 || static_cast<std::size_t>(w) >= n) throw InvalidTree("neighbor index out of range");
      if (static_cast<std::size_t>(w) == v) throw InvalidTree("self-loop");
    }
    std::vector<Vertex> sorted = nb;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvalidTree("parallel edge");
    }
    half_edges += nb.size();
  }
  if (half_edges != 2 * (n - 1)) throw InvalidTree("a tree on n vertices has n-1 edges");
  for (std::size_t v = 0; v < n; ++v) {
    for (Vertex w : adjacency_[v]) {
      const auto& back = adjacency_[w];
      if (std::find(back.begin(), back.end(), static_cast<Vertex>(v)) == back.end()) {
        throw InvalidTree("adjacency is not symmetric");
      }
    }
  }
  auto dist = bfs_distances(*this, 0);
  if (std::any_of(dist.begin(), dist.end(), [](std::size_t d) { return d == kUnvisited; })) {
    throw InvalidTree("graph is not connected");
  }
}

Tree Tree::from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  if (n == 0) throw InvalidTree("a tree has at least one vertex");
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n) {
      throw InvalidTree("edge endpoint out of range");
    }
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return Tree(std::move(adj));
}

std::vector<std::pair<Vertex, Vertex>> Tree::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(size() - 1);
  for (std::size_t v = 0; v < size(); ++v) {
    for (Vertex w : adjacency_[v]) {
      if (static_cast<Vertex>(v) < w) out.emplace_back(static_cast<Vertex>(v), w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

RootedTree::RootedTree(std::vector<Vertex> parent) : parent_(std::move(parent)) {
  const std::size_t n = parent_.size();
  if (n == 0) throw InvalidTree("a rooted tree has at least one vertex");
  if (parent_[0] != -1) throw InvalidTree("vertex 0 is the root and must have parent -1");
  children_.assign(n, {});
  for (std::size_t v = 1; v < n; ++v) {
    Vertex p = parent_[v];
    if (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == v) {
      throw InvalidTree("invalid parent index at vertex " + std::to_string(v));
    }
    children_[p].push_back(static_cast<Vertex>(v));
  }
  std::size_t reached = 1;
  std::vector<Vertex> stack{0};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex c : children_[v]) {
      ++reached;
      stack.push_back(c);
    }
  }
  if (reached != n) throw InvalidTree("parent array contains a cycle");
}

Tree RootedTree::unrooted() const {
  std::vector<std::vector<Vertex>> adj(size());
  for (std::size_t v = 1; v < size(); ++v) {
    adj[v].push_back(parent_[v]);
    adj[parent_[v]].push_back(static_cast<Vertex>(v));
  }
  return Tree(std::move(adj));
}

std::size_t RootedTree::height() const {
  std::size_t best = 0;
  std::vector<std::pair<Vertex, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    for (Vertex c : children_[v]) stack.emplace_back(c, d + 1);
  }
  return best;
}

RootedTree root_at(const Tree& t, Vertex v) {
  check_vertex(t, v);
  return rooted_component(t, v, -1);
}

std::string CanonicalCode::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (i) s.push_back('.');
    s += std::to_string(code[i]);
  }
  return s;
}

CanonicalCode CanonicalCode::from_string(const std::string& s) {
  CanonicalCode c;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '.')) c.code.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  return c;
}

std::size_t CanonicalCodeHash::operator()(const CanonicalCode& c) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto x : c.code) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

namespace {

// Post-order over a rooted tree; children codes are consumed by their parent
// unless keep_all is set.
std::vector<std::vector<std::uint32_t>> build_codes(const RootedTree& t, bool keep_all) {
  const std::size_t n = t.size();
  std::vector<Vertex> order{0};
  order.reserve(n);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (Vertex c : t.children(order[head])) order.push_back(c);
  }
  std::vector<std::vector<std::uint32_t>> codes(n);
  std::vector<std::vector<std::uint32_t>*> kids;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex v = *it;
    kids.clear();
    std::size_t len = 1;
    for (Vertex c : t.children(v)) {
      kids.push_back(&codes[c]);
      len += codes[c].size();
    }
    std::sort(kids.begin(), kids.end(), [](auto* a, auto* b) { return *a > *b; });
    auto& out = codes[v];
    out.reserve(len);
    out.push_back(static_cast<std::uint32_t>(kids.size()));
    for (auto* k : kids) {
      append_code(out, *k);
      if (!keep_all) std::vector<std::uint32_t>().swap(*k);
    }
  }
  return codes;
}

}  // namespace

CanonicalCode canonical_code(const RootedTree& t) {
  auto codes = build_codes(t, false);
  return CanonicalCode{std::move(codes[0])};
}

std::vector<CanonicalCode> subtree_codes(const RootedTree& t) {
  auto codes = build_codes(t, true);
  std::vector<CanonicalCode> out;
  out.reserve(codes.size());
  for (auto& c : codes) out.push_back(CanonicalCode{std::move(c)});
  return out;
}

CanonicalCode free_canonical_code(const Tree& t) {
  auto cs = centers(t);
  if (cs.size() == 1) return canonical_code(root_at(t, cs[0]));
  auto a = canonical_code(rooted_component(t, cs[0], cs[1]));
  auto b = canonical_code(rooted_component(t, cs[1], cs[0]));
  if (a < b) std::swap(a, b);
  append_code(a.code, b.code);
  return a;
}

RootedTree tree_from_code(const CanonicalCode& c) {
  if (c.code.empty()) throw InvalidTree("empty code");
  std::vector<Vertex> parent;
  // (vertex, remaining children to attach)
  std::vector<std::pair<Vertex, std::uint32_t>> open;
  for (std::size_t i = 0; i < c.code.size(); ++i) {
    if (i == 0) {
      parent.push_back(-1);
    } else {
      if (open.empty()) throw InvalidTree("code describes more than one tree");
      parent.push_back(open.back().first);
      if (--open.back().second == 0) open.pop_back();
    }
    if (c.code[i] > 0) open.emplace_back(static_cast<Vertex>(i), c.code[i]);
  }
  if (!open.empty()) throw InvalidTree("truncated code");
  return RootedTree(std::move(parent));
}

std::vector<std::size_t> bfs_distances(const Tree& t, Vertex source) {
  check_vertex(t, source);
  std::vector<std::size_t> dist(t.size(), kUnvisited);
  std::vector<Vertex> queue{source};
  queue.reserve(t.size());
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex v = queue[head];
    for (Vertex w : t.neighbors(v)) {
      if (dist[w] == kUnvisited) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::size_t distance(const Tree& t, Vertex u, Vertex v) {
  check_vertex(t, v);
  return bfs_distances(t, u)[v];
}

std::size_t diameter(const Tree& t) {
  auto d0 = bfs_distances(t, 0);
  auto far = static_cast<Vertex>(std::max_element(d0.begin(), d0.end()) - d0.begin());
  auto d1 = bfs_distances(t, far);
  return *std::max_element(d1.begin(), d1.end());
}

std::vector<Vertex> centers(const Tree& t) {
  const std::size_t n = t.size();
  if (n <= 2) {
    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<std::size_t> deg(n);
  std::vector<Vertex> layer;
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = t.degree(static_cast<Vertex>(v));
    if (deg[v] == 1) layer.push_back(static_cast<Vertex>(v));
  }
  std::size_t remaining = n;
  while (remaining > 2) {
    remaining -= layer.size();
    std::vector<Vertex> next;
    for (Vertex v : layer) {
      for (Vertex w : t.neighbors(v)) {
        if (--deg[w] == 1) next.push_back(w);
      }
    }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

RootedTree k_neighborhood(const Tree& t, Vertex v, std::size_t k) {
  check_vertex(t, v);
  std::vector<Vertex> parent{-1};
  std::vector<std::pair<Vertex, std::size_t>> order{{v, 0}};
  std::vector<Vertex> prev{-1};
  for (std::size_t head = 0; head < order.size(); ++head) {
    auto [x, d] = order[head];
    if (d == k) continue;
    for (Vertex w : t.neighbors(x)) {
      if (w == prev[head]) continue;
      order.emplace_back(w, d + 1);
      prev.push_back(x);
      parent.push_back(static_cast<Vertex>(head));
    }
  }
  return RootedTree(std::move(parent));
}

std::map<std::size_t, std::size_t> degree_histogram(const Tree& t) {
  std::map<std::size_t, std::size_t> h;
  for (std::size_t v = 0; v < t.size(); ++v) ++h[t.degree(static_cast<Vertex>(v))];
  return h;
}

Tree relabel(const Tree& t, const std::vector<Vertex>& perm) {
  if (perm.size() != t.size()) throw std::invalid_argument("permutation size mismatch");
  std::vector<std::vector<Vertex>> adj(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) {
    for (Vertex w : t.neighbors(static_cast<Vertex>(v))) adj[perm[v]].push_back(perm[w]);
  }
  return Tree(std::move(adj));
}

nlohmann::json to_json(const RootedTree& t) {
  return nlohmann::json{{"n", t.size()}, {"parent", t.parents()}};
}

nlohmann::json to_json(const Tree& t) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : t.edges()) edges.push_back({u, v});
  return nlohmann::json{{"n", t.size()}, {"edges", std::move(edges)}};
}

RootedTree rooted_from_json(const nlohmann::json& j) {
  auto parent = j.at("parent").get<std::vector<Vertex>>();
  if (j.at("n").get<std::size_t>() != parent.size()) throw InvalidTree("n does not match parent array");
  return RootedTree(std::move(parent));
}

Tree tree_from_json(const nlohmann::json& j) {
  auto n = j.at("n").get<std::size_t>();
  auto edges = j.at("edges").get<std::vector<std::pair<Vertex, Vertex>>>();
  return Tree::from_edges(n, edges);
}

}  // namespace polyaforge
