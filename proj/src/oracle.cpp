#include "polyaforge/oracle.hpp"

#include <map>
#include <set>

namespace polyaforge {

namespace {

RootedTree from_levels(const std::vector<int>& level) {
  std::vector<Vertex> parent(level.size(), -1);
  std::vector<Vertex> last_at(level.size(), -1);
  for (std::size_t i = 0; i < level.size(); ++i) {
    if (i > 0) parent[i] = last_at[level[i] - 1];
    last_at[level[i]] = static_cast<Vertex>(i);
  }
  return RootedTree(std::move(parent));
}

bool degrees_ok_rooted(const RootedTree& t, const DegreeSet& omega_star) {
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (!omega_star.contains(static_cast<long long>(t.outdegree(static_cast<Vertex>(v))))) return false;
  }
  return true;
}

// Unrooted degrees: the root has no parent edge.
bool degrees_ok_unrooted(const RootedTree& t, const DegreeSet& omega) {
  for (std::size_t v = 0; v < t.size(); ++v) {
    long long d = static_cast<long long>(t.outdegree(static_cast<Vertex>(v))) + (v == 0 ? 0 : 1);
    if (!omega.contains(d)) return false;
  }
  return true;
}

struct ChildClass {
  Vertex representative;
  std::size_t multiplicity;
};

std::map<CanonicalCode, ChildClass, std::greater<>> child_classes(const RootedTree& t, Vertex v,
                                                                  const std::vector<CanonicalCode>& codes) {
  std::map<CanonicalCode, ChildClass, std::greater<>> out;
  for (Vertex c : t.children(v)) {
    auto [it, fresh] = out.try_emplace(codes[c], ChildClass{c, 0});
    ++it->second.multiplicity;
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> pointings_at(const RootedTree& t, Vertex v,
                                                     const std::vector<CanonicalCode>& codes) {
  std::vector<std::vector<std::uint32_t>> out{{0}};
  for (const auto& [code, cls] : child_classes(t, v, codes)) {
    auto sub = pointings_at(t, cls.representative, codes);
    for (std::size_t k = 1; k <= cls.multiplicity; ++k) {
      for (const auto& p : sub) {
        std::vector<std::uint32_t> x{1, static_cast<std::uint32_t>(k)};
        x.insert(x.end(), code.code.begin(), code.code.end());
        x.insert(x.end(), p.begin(), p.end());
        out.push_back(std::move(x));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<RootedTree> all_rooted_trees(int n) {
  if (n < 1) return {};
  std::vector<int> level(n);
  for (int i = 0; i < n; ++i) level[i] = i;
  std::vector<RootedTree> out;
  while (true) {
    out.push_back(from_levels(level));
    int p = n - 1;
    while (p > 0 && level[p] <= 1) --p;
    if (p == 0) break;
    int q = p - 1;
    while (level[q] != level[p] - 1) --q;
    for (int i = p; i < n; ++i) level[i] = level[i - (p - q)];
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> rooted_pointings(const RootedTree& t) {
  return pointings_at(t, 0, subtree_codes(t));
}

std::vector<CanonicalCode> brute_force_enumerate(const DegreeSet& omega, int n, ObjectKind kind) {
  if (n > kBruteForceMaxN) {
    throw SizeLimitExceeded("brute force enumeration is limited to n <= " + std::to_string(kBruteForceMaxN));
  }
  if (n < 1) throw std::invalid_argument("n must be positive");
  const DegreeSet omega_star = omega.shifted(1);
  std::set<CanonicalCode> found;

  auto tagged = [](std::uint32_t tag, std::initializer_list<const std::vector<std::uint32_t>*> parts) {
    CanonicalCode c{{tag}};
    for (const auto* p : parts) c.code.insert(c.code.end(), p->begin(), p->end());
    return c;
  };

  switch (kind) {
    case ObjectKind::rooted:
      for (const auto& t : all_rooted_trees(n)) {
        if (degrees_ok_rooted(t, omega_star)) found.insert(canonical_code(t));
      }
      break;
    case ObjectKind::free:
      if (n == 1) return {CanonicalCode{{0}}};
      for (const auto& t : all_rooted_trees(n)) {
        if (degrees_ok_unrooted(t, omega)) found.insert(free_canonical_code(t.unrooted()));
      }
      break;
    case ObjectKind::S:
      for (const auto& t : all_rooted_trees(n)) {
        if (degrees_ok_unrooted(t, omega)) {
          auto c = canonical_code(t);
          found.insert(tagged(1, {&c.code}));
        }
      }
      break;
    case ObjectKind::E:
      if (n % 2 != 0) break;
      for (const auto& h : all_rooted_trees(n / 2)) {
        if (!degrees_ok_rooted(h, omega_star)) continue;
        auto c = canonical_code(h);
        for (const auto& p : rooted_pointings(h)) found.insert(tagged(2, {&c.code, &p}));
      }
      break;
    case ObjectKind::V:
      for (const auto& t : all_rooted_trees(n)) {
        if (!degrees_ok_unrooted(t, omega)) continue;
        auto codes = subtree_codes(t);
        for (const auto& [child, cls] : child_classes(t, 0, codes)) {
          auto sub = pointings_at(t, cls.representative, codes);
          for (std::size_t k = 2; k <= cls.multiplicity; ++k) {
            std::vector<std::uint32_t> kk{static_cast<std::uint32_t>(k)};
            for (const auto& p : sub) found.insert(tagged(3, {&codes[0].code, &child.code, &kk, &p}));
          }
        }
      }
      break;
  }
  return {found.begin(), found.end()};
}

}  // namespace polyaforge
