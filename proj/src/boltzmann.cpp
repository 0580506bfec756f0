#include "polyaforge/boltzmann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polyaforge {

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
}

std::uint64_t RandomSource::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

char to_char(PointedClass c) {
  switch (c) {
    case PointedClass::S: return 'S';
    case PointedClass::E: return 'E';
    case PointedClass::V: return 'V';
  }
  return '?';
}

namespace {

constexpr long double kSetTailCutoff = 1e-20L;
constexpr long double kOrbitTailCutoff = 1e-13L;

// Index of the draw among nonnegative weights; rounding at the end of the
// scan falls back to the last positive weight.
std::size_t pick(const std::vector<long double>& w, RandomSource& rng) {
  long double total = 0;
  for (long double x : w) total += x;
  long double target = rng.uniform() * total;
  std::size_t last = w.size();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0) continue;
    last = i;
    if (target < w[i]) return i;
    target -= w[i];
  }
  if (last == w.size()) throw std::logic_error("pick from all-zero weights");
  return last;
}

}  // namespace

BoltzmannContext BoltzmannContext::build(const DegreeSet& omega, std::size_t n_max) {
  auto r = DegreeRestriction::from_omega(omega);
  auto sing = radius_of_convergence(r.omega_star, 1e-16L);
  NumericCounts counts(r.omega_star, omega.cap(), std::max<std::size_t>(n_max, 2));
  BoltzmannContext ctx(std::move(r), std::move(sing), std::move(counts));

  const int d_min = omega.cap();
  ctx.set_weights_.assign(ctx.i_max() + 1, {});
  for (std::size_t i = 1; i <= ctx.i_max(); ++i) {
    std::vector<long double> P{1.0L};
    long double sum = 1;
    for (std::size_t d = 1; d < 100000; ++d) {
      long double acc = 0;
      for (std::size_t j = 1; j <= d; ++j) acc += ctx.s_value(i * j) * P[d - j];
      P.push_back(acc / static_cast<long double>(d));
      sum += P.back();
      if (static_cast<int>(d) >= d_min && P.back() < kSetTailCutoff * sum && P.back() <= P[d - 1]) break;
    }
    ctx.tail_bound_ = std::max(ctx.tail_bound_, P.back() / sum);
    ctx.set_weights_[i] = std::move(P);
  }

  for (int l = 0; l <= omega.cap(); ++l) ctx.omega_minus_.push_back(omega.shifted(l));

  long double first = 0;
  for (std::size_t l = 2;; ++l) {
    const auto& lam = ctx.omega_minus(l);
    if (lam.empty()) break;
    long double w = ctx.t_value(l) * ctx.set_total(lam, 1);
    if (l == 2) first = w;
    ctx.ell_max_ = l;
    if (w < kOrbitTailCutoff * first || l > 4000) break;
  }
  return ctx;
}

long double BoltzmannContext::s_value(std::size_t k) const {
  return k <= sing_.i_max ? sing_.s[k] : std::pow(sing_.rho, static_cast<long double>(k));
}

long double BoltzmannContext::t_value(std::size_t k) const {
  if (k < 2) throw std::invalid_argument("t_1 is infinite at the singularity");
  return k <= sing_.i_max ? sing_.t[k] : std::pow(sing_.rho, static_cast<long double>(k));
}

const std::vector<long double>& BoltzmannContext::set_weights(std::size_t scale) const {
  if (scale < 1 || scale > sing_.i_max) throw std::out_of_range("scale outside the tabulated range");
  return set_weights_[scale];
}

long double BoltzmannContext::set_total(const DegreeSet& lambda, std::size_t scale) const {
  const auto& P = set_weights(scale);
  long double sum = 0;
  for (std::size_t d = 0; d < P.size(); ++d) {
    if (lambda.contains(static_cast<long long>(d))) sum += P[d];
  }
  return sum;
}

const DegreeSet& BoltzmannContext::omega_minus(std::size_t l) const {
  return omega_minus_[std::min(l, omega_minus_.size() - 1)];
}

ClassWeights BoltzmannContext::class_weights(std::size_t n) const {
  if (n < 2 || n > n_max()) {
    throw UnsupportedSize("class weights need 2 <= n <= " + std::to_string(n_max()));
  }
  const auto& c = counts_;
  ClassWeights w;
  w.s = c.total(restriction_.omega, n - 1);
  if (n % 2 == 0) w.e = static_cast<long double>(n / 2) * c.a(n / 2);
  for (std::size_t l = 2; l + 1 <= n; ++l) {
    const auto& lam = omega_minus(l);
    if (lam.empty()) break;
    for (std::size_t m = 1; l * m + 1 <= n; ++m) {
      if (c.a(m) == 0) continue;
      w.v += static_cast<long double>(m) * c.a(m) * c.total(lam, n - 1 - l * m);
    }
  }
  return w;
}

namespace {

using Parents = std::vector<Vertex>;

// Appends `times` copies of the subtree stored at [start, start + size),
// each hanging from `parent`.
void copy_subtree(Parents& P, std::size_t start, std::size_t size, Vertex parent, std::size_t times) {
  for (std::size_t t = 0; t < times; ++t) {
    const auto base = static_cast<Vertex>(P.size());
    P.push_back(parent);
    for (std::size_t i = 1; i < size; ++i) P.push_back(P[start + i] - static_cast<Vertex>(start) + base);
  }
}

// ---- conditioned (recursive-method) sampling ----

class Conditioned {
 public:
  Conditioned(const BoltzmannContext& ctx, RandomSource& rng) : ctx_(ctx), c_(ctx.counts()), rng_(rng) {}

  void tree(std::size_t m, Vertex parent, Parents& P) {
    const auto root = static_cast<Vertex>(P.size());
    P.push_back(parent);
    multiset(ctx_.restriction().omega_star, m - 1, root, P);
  }

  // j identical uniform trees of size m under parent
  void copies(std::size_t m, std::size_t j, Vertex parent, Parents& P) {
    const std::size_t start = P.size();
    tree(m, parent, P);
    copy_subtree(P, start, m, parent, j - 1);
  }

  void multiset(const DegreeSet& lambda, std::size_t N, Vertex parent, Parents& P) {
    std::vector<long double> w;
    for (int c : lambda.finite_part()) w.push_back(c_.exact(c, N));
    if (lambda.is_cofinite()) w.push_back(c_.at_least(*lambda.tail_min(), N));
    std::size_t k = pick(w, rng_);
    if (k < lambda.finite_part().size()) {
      exact(lambda.finite_part()[k], N, parent, P);
    } else {
      at_least(*lambda.tail_min(), N, parent, P);
    }
  }

 private:
  struct Choice {
    std::size_t j = 0, m = 0, r = 0;
    int next = 0;
  };

  void exact(int c, std::size_t N, Vertex parent, Parents& P) {
    while (c > 0) {
      long double target = rng_.uniform() * c * c_.exact(c, N);
      Choice ch, last;
      bool found = false;
      for (std::size_t r = 0; r < N && !found; ++r) {
        const std::size_t k = N - r;
        for (std::size_t j = 1; j <= static_cast<std::size_t>(c) && j <= k && !found; ++j) {
          if (k % j) continue;
          long double w = c_.a(k / j) * c_.exact(c - static_cast<int>(j), r);
          if (w <= 0) continue;
          last = {j, k / j, r, c - static_cast<int>(j)};
          if (target < w) {
            ch = last;
            found = true;
          }
          target -= w;
        }
      }
      if (!found) ch = last;
      if (ch.j == 0) throw std::logic_error("empty exact-count multiset draw");
      copies(ch.m, ch.j, parent, P);
      c = ch.next;
      N = ch.r;
    }
  }

  void at_least(int s, std::size_t N, Vertex parent, Parents& P) {
    while (N > 0) {
      long double target = rng_.uniform() * static_cast<long double>(N) * c_.at_least(s, N);
      Choice ch, last;
      bool found = false;
      for (std::size_t r = 0; r < N && !found; ++r) {
        const std::size_t k = N - r;
        const long double h0 = c_.at_least(0, r);
        long double big = c_.pointed_weight(s, k) * h0;
        if (big > 0) {
          if (target < big) {
            // j = k/m >= s, then the remainder is unrestricted
            for (std::size_t m : c_.divisors(k)) {
              if (static_cast<int>(k / m) < s) break;
              long double w = static_cast<long double>(m) * c_.a(m) * h0;
              if (w <= 0) continue;
              last = {k / m, m, r, 0};
              if (target < w) break;
              target -= w;
            }
            ch = last;
            found = true;
            break;
          }
          target -= big;
          for (std::size_t m : c_.divisors(k)) {
            if (static_cast<int>(k / m) < s) break;
            if (c_.a(m) > 0) last = {k / m, m, r, 0};
          }
        }
        for (int j = 1; j < s && !found; ++j) {
          if (k % j) continue;
          const std::size_t m = k / j;
          long double w = static_cast<long double>(m) * c_.a(m) * c_.at_least(s - j, r);
          if (w <= 0) continue;
          last = {static_cast<std::size_t>(j), m, r, s - j};
          if (target < w) {
            ch = last;
            found = true;
          }
          target -= w;
        }
      }
      if (!found) ch = last;
      if (ch.j == 0) throw std::logic_error("empty multiset draw");
      copies(ch.m, ch.j, parent, P);
      s = ch.next;
      N = ch.r;
    }
    if (s > 0) throw std::logic_error("multiset draw ended below its minimum count");
  }

  const BoltzmannContext& ctx_;
  const NumericCounts& c_;
  RandomSource& rng_;
};

// ---- Boltzmann sampling at x = rho ----

std::vector<std::size_t> partition_lengths(const BoltzmannContext& ctx, const DegreeSet& lambda, std::size_t scale,
                                           RandomSource& rng) {
  const auto& P = ctx.set_weights(scale);
  std::vector<long double> w(P.size(), 0.0L);
  bool any = false;
  for (std::size_t d = 0; d < P.size(); ++d) {
    if (lambda.contains(static_cast<long long>(d)) && P[d] > 0) {
      w[d] = P[d];
      any = true;
    }
  }
  if (!any) throw InfeasibleRestriction("restriction " + lambda.to_string() + " has no weight");
  std::size_t d = pick(w, rng);
  std::vector<std::size_t> lengths;
  std::vector<long double> split;
  while (d > 0) {
    split.assign(d, 0.0L);
    for (std::size_t j = 1; j <= d; ++j) split[j - 1] = ctx.s_value(scale * j) * P[d - j];
    std::size_t j = pick(split, rng) + 1;
    lengths.push_back(j);
    d -= j;
  }
  return lengths;
}

class Boltzmann {
 public:
  Boltzmann(const BoltzmannContext& ctx, RandomSource& rng, std::size_t budget)
      : ctx_(ctx), rng_(rng), budget_(budget) {}

  // Gamma A at the given scale; false once the budget is exceeded.
  bool tree(std::size_t scale, Vertex parent, Parents& P) {
    const auto root = static_cast<Vertex>(P.size());
    P.push_back(parent);
    if (P.size() > budget_) return false;
    if (scale > ctx_.i_max()) return true;
    return children(ctx_.restriction().omega_star, scale, root, P);
  }

  bool children(const DegreeSet& lambda, std::size_t scale, Vertex root, Parents& P) {
    for (std::size_t j : partition_lengths(ctx_, lambda, scale, rng_)) {
      const std::size_t start = P.size();
      if (!tree(scale * j, root, P)) return false;
      const std::size_t size = P.size() - start;
      if (P.size() + (j - 1) * size > budget_) return false;
      copy_subtree(P, start, size, root, j - 1);
    }
    return true;
  }

 private:
  const BoltzmannContext& ctx_;
  RandomSource& rng_;
  std::size_t budget_;
};

void check_size(const BoltzmannContext& ctx, std::size_t n) {
  if (n > ctx.n_max()) {
    throw UnsupportedSize("n = " + std::to_string(n) + " exceeds the context limit " + std::to_string(ctx.n_max()));
  }
}

UnsupportedSize no_objects(const char* what, const BoltzmannContext& ctx, std::size_t n) {
  return UnsupportedSize(std::string("no ") + what + " of size " + std::to_string(n) + " for omega " +
                         ctx.restriction().omega.to_string() + " (sizes must satisfy n = 2 mod " +
                         std::to_string(ctx.restriction().period) + ")");
}

Tree to_tree(Parents P) { return RootedTree(std::move(P)).unrooted(); }

}  // namespace

std::vector<std::size_t> sample_set_partition(const BoltzmannContext& ctx, const DegreeSet& lambda,
                                              std::size_t scale, RandomSource& rng) {
  auto lengths = partition_lengths(ctx, lambda, scale, rng);
  std::vector<std::size_t> type(1, 0);
  for (std::size_t j : lengths) {
    if (type.size() <= j) type.resize(j + 1, 0);
    ++type[j];
  }
  return type;
}

std::optional<RootedTree> sample_rooted_symmetry(const BoltzmannContext& ctx, RandomSource& rng,
                                                 std::optional<std::size_t> max_size) {
  Parents P;
  Boltzmann b(ctx, rng, max_size.value_or(std::numeric_limits<std::size_t>::max()));
  if (!b.tree(1, -1, P)) return std::nullopt;
  return RootedTree(std::move(P));
}

RootedTree sample_polya_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng, SamplingMethod method,
                              std::uint64_t* attempts) {
  check_size(ctx, n);
  if (n == 0 || ctx.counts().a(n) <= 0) throw no_objects("rooted trees", ctx, n);
  Parents P;
  if (method == SamplingMethod::conditioned) {
    Conditioned(ctx, rng).tree(n, -1, P);
    if (attempts) *attempts = 1;
    return RootedTree(std::move(P));
  }
  for (std::uint64_t k = 1;; ++k) {
    P.clear();
    Boltzmann b(ctx, rng, n);
    if (b.tree(1, -1, P) && P.size() == n) {
      if (attempts) *attempts = k;
      return RootedTree(std::move(P));
    }
  }
}

CyclePointedTree sample_S_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng,
                                SamplingMethod method) {
  check_size(ctx, n);
  if (n < 2 || ctx.counts().total(ctx.restriction().omega, n - 1) <= 0) throw no_objects("S-objects", ctx, n);
  const auto& omega = ctx.restriction().omega;
  Parents P{-1};
  std::uint64_t attempts = 1;
  if (method == SamplingMethod::conditioned) {
    Conditioned(ctx, rng).multiset(omega, n - 1, 0, P);
  } else {
    for (;; ++attempts) {
      P.assign(1, -1);
      Boltzmann b(ctx, rng, n);
      if (b.children(omega, 1, 0, P) && P.size() == n) break;
    }
  }
  return {to_tree(std::move(P)), {0}, PointedClass::S, attempts};
}

CyclePointedTree sample_E_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng,
                                SamplingMethod method) {
  check_size(ctx, n);
  if (n < 2 || n % 2 != 0 || ctx.counts().a(n / 2) <= 0) throw no_objects("E-objects", ctx, n);
  // Every half tree of size m carries exactly m pointings, so the half of a
  // uniform E-object is a uniform rooted tree.
  std::uint64_t attempts = 1;
  auto half = sample_polya_exact(ctx, n / 2, rng, method, &attempts);
  Parents P = half.parents();
  copy_subtree(P, 0, n / 2, 0, 1);
  return {to_tree(std::move(P)), {0, static_cast<Vertex>(n / 2)}, PointedClass::E, attempts};
}

CyclePointedTree sample_V_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng,
                                SamplingMethod method) {
  check_size(ctx, n);
  if (n < 3 || ctx.class_weights(n).v <= 0) throw no_objects("V-objects", ctx, n);
  const auto& c = ctx.counts();
  // A V-object is a root, an orbit of l >= 2 identical pointed subtrees and an
  // unmarked child set from omega - l. The projection forgets the pointing
  // inside the marked subtree; each size-m subtree carries m pointings, so its
  // shape is uniform given m.
  if (method == SamplingMethod::conditioned) {
    std::vector<long double> w;
    std::vector<std::pair<std::size_t, std::size_t>> lm;
    for (std::size_t l = 2; l + 1 <= n; ++l) {
      const auto& lam = ctx.omega_minus(l);
      if (lam.empty()) break;
      for (std::size_t m = 1; l * m + 1 <= n; ++m) {
        if (c.a(m) <= 0) continue;
        w.push_back(static_cast<long double>(m) * c.a(m) * c.total(lam, n - 1 - l * m));
        lm.emplace_back(l, m);
      }
    }
    auto [l, m] = lm[pick(w, rng)];
    Parents P{-1};
    Conditioned cond(ctx, rng);
    const auto first = static_cast<Vertex>(P.size());
    cond.copies(m, l, 0, P);
    cond.multiset(ctx.omega_minus(l), n - 1 - l * m, 0, P);
    std::vector<Vertex> cycle;
    for (std::size_t i = 0; i < l; ++i) cycle.push_back(first + static_cast<Vertex>(i * m));
    return {to_tree(std::move(P)), cycle, PointedClass::V, 1};
  }

  std::vector<long double> lw(ctx.ell_max() + 1, 0.0L);
  for (std::size_t l = 2; l <= ctx.ell_max(); ++l) {
    const auto& lam = ctx.omega_minus(l);
    if (!lam.empty()) lw[l] = ctx.t_value(l) * ctx.set_total(lam, 1);
  }
  const long double rho = ctx.rho();
  for (std::uint64_t attempts = 1;; ++attempts) {
    const std::size_t l = pick(lw, rng);
    // marked subtree size m with probability m a_m rho^{lm} / t_l
    long double target = rng.uniform() * ctx.t_value(l);
    std::size_t m = 0;
    for (std::size_t k = 1; l * k + 1 <= n; ++k) {
      long double w = static_cast<long double>(k) * c.a(k) * std::pow(rho, static_cast<long double>(l * k));
      if (target < w) {
        m = k;
        break;
      }
      target -= w;
    }
    if (m == 0) continue;  // marked orbit alone is already too large
    Parents P{-1};
    auto marked = sample_polya_exact(ctx, m, rng, SamplingMethod::rejection);
    const auto first = static_cast<Vertex>(P.size());
    for (Vertex p : marked.parents()) P.push_back(p < 0 ? 0 : p + first);
    copy_subtree(P, first, m, 0, l - 1);
    Boltzmann b(ctx, rng, n);
    if (!b.children(ctx.omega_minus(l), 1, 0, P) || P.size() != n) continue;
    std::vector<Vertex> cycle;
    for (std::size_t i = 0; i < l; ++i) cycle.push_back(first + static_cast<Vertex>(i * m));
    return {to_tree(std::move(P)), cycle, PointedClass::V, attempts};
  }
}

CyclePointedTree sample_unrooted_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng,
                                       SamplingMethod method) {
  if (n < 2) throw UnsupportedSize("unrooted sampling needs n >= 2");
  check_size(ctx, n);
  if (!ctx.restriction().size_admissible(static_cast<long long>(n))) throw no_objects("trees", ctx, n);
  auto w = ctx.class_weights(n);
  if (w.total() <= 0) throw no_objects("trees", ctx, n);
  switch (pick({w.s, w.e, w.v}, rng)) {
    case 0: return sample_S_exact(ctx, n, rng, method);
    case 1: return sample_E_exact(ctx, n, rng, method);
    default: return sample_V_exact(ctx, n, rng, method);
  }
}

}  // namespace polyaforge
