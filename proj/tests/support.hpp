#pragma once

#include <boost/math/distributions/chi_squared.hpp>
#include <functional>
#include <map>
#include <vector>

#include "polyaforge/tree.hpp"

namespace polyaforge::testing {

// Backtracking over vertex images; `fixed` pins some images in advance.
// Calls visit(phi) for every automorphism consistent with the pins; stops
// early when visit returns false.
inline void for_each_automorphism(const Tree& t, const std::map<Vertex, Vertex>& fixed,
                                  const std::function<bool(const std::vector<Vertex>&)>& visit) {
  const auto n = static_cast<Vertex>(t.size());
  // BFS order so each vertex after the first has an earlier neighbor
  std::vector<Vertex> order{0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  for (std::size_t h = 0; h < order.size(); ++h) {
    for (Vertex w : t.neighbors(order[h])) {
      if (!seen[w]) {
        seen[w] = 1;
        order.push_back(w);
      }
    }
  }
  std::vector<Vertex> phi(n, -1);
  std::vector<char> used(n, 0);
  bool stop = false;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (stop) return;
    if (i == order.size()) {
      stop = !visit(phi);
      return;
    }
    Vertex v = order[i];
    auto consistent = [&](Vertex img) {
      if (used[img] || t.degree(img) != t.degree(v)) return false;
      auto pin = fixed.find(v);
      if (pin != fixed.end() && pin->second != img) return false;
      for (Vertex w : t.neighbors(v)) {
        if (phi[w] < 0) continue;
        const auto& nb = t.neighbors(img);
        if (std::find(nb.begin(), nb.end(), phi[w]) == nb.end()) return false;
      }
      return true;
    };
    for (Vertex img = 0; img < n; ++img) {
      if (!consistent(img)) continue;
      phi[v] = img;
      used[img] = 1;
      go(i + 1);
      used[img] = 0;
      phi[v] = -1;
      if (stop) return;
    }
  };
  go(0);
}

inline std::vector<std::vector<Vertex>> all_automorphisms(const Tree& t) {
  std::vector<std::vector<Vertex>> out;
  for_each_automorphism(t, {}, [&](const std::vector<Vertex>& phi) {
    out.push_back(phi);
    return true;
  });
  return out;
}

// Whether some automorphism maps cycle[i] to cycle[i+1] cyclically.
inline bool cycle_is_realized(const Tree& t, const std::vector<Vertex>& cycle) {
  std::map<Vertex, Vertex> pins;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (!pins.emplace(cycle[i], cycle[(i + 1) % cycle.size()]).second) return false;
  }
  bool found = false;
  for_each_automorphism(t, pins, [&](const std::vector<Vertex>&) {
    found = true;
    return false;
  });
  return found;
}

inline double chi_square_uniform_pvalue(const std::vector<double>& observed) {
  double total = 0;
  for (double x : observed) total += x;
  const double e = total / static_cast<double>(observed.size());
  double stat = 0;
  for (double x : observed) stat += (x - e) * (x - e) / e;
  if (observed.size() < 2) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

inline double chi_square_pvalue(const std::vector<double>& observed, const std::vector<double>& probs) {
  double total = 0;
  for (double x : observed) total += x;
  double stat = 0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probs[i] <= 0) continue;
    const double e = total * probs[i];
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  if (cells < 2) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(cells - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace polyaforge::testing
