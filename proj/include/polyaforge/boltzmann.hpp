#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "polyaforge/degree_set.hpp"
#include "polyaforge/numeric_counts.hpp"
#include "polyaforge/tree.hpp"

namespace polyaforge {

class UnsupportedSize : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleRestriction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Deterministic per (seed, stream_id).
class RandomSource {
 public:
  using result_type = std::uint64_t;

  RandomSource(std::uint64_t seed, std::uint64_t stream_id);

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const { return stream_; }

 private:
  std::uint64_t seed_, stream_;
  std::mt19937_64 engine_;
};

enum class SamplingMethod {
  conditioned,  // recursive method on size-indexed counts, one pass per tree
  rejection,    // critical Boltzmann sampler, retried until the size is hit
};

enum class PointedClass { S, E, V };

char to_char(PointedClass c);

struct CyclePointedTree {
  Tree tree;
  /// One cycle of an automorphism of `tree`: the root for S, the two half
  /// roots for E, the roots of the identical copies for V.
  std::vector<Vertex> marked_cycle;
  PointedClass cls = PointedClass::S;
  std::uint64_t attempts = 1;
};

struct ClassWeights {
  long double s = 0, e = 0, v = 0;
  [[nodiscard]] long double total() const { return s + e + v; }
};

/// Immutable sampling state for one degree set: the singularity and evaluated
/// series for Boltzmann sampling, per-scale SET weight tables, and numeric
/// size-indexed counts up to n_max for the conditioned samplers.
class BoltzmannContext {
 public:
  static BoltzmannContext build(const DegreeSet& omega, std::size_t n_max);

  [[nodiscard]] const DegreeRestriction& restriction() const { return restriction_; }
  [[nodiscard]] long double rho() const { return sing_.rho; }
  [[nodiscard]] std::size_t i_max() const { return sing_.i_max; }
  [[nodiscard]] std::size_t n_max() const { return counts_.max_n(); }
  [[nodiscard]] const NumericCounts& counts() const { return counts_; }

  /// A(rho^k); rho^k beyond i_max (only the single vertex is visible there).
  [[nodiscard]] long double s_value(std::size_t k) const;
  /// A°(rho^k) for k >= 2.
  [[nodiscard]] long double t_value(std::size_t k) const;

  /// P_d at scale i, d = 0..d_max(i): coefficients of u^d in exp(sum_j u^j s_{ij} / j).
  [[nodiscard]] const std::vector<long double>& set_weights(std::size_t scale) const;
  /// Z_SET_lambda(s_i, s_2i, ...) = sum_{d in lambda} P_d at scale i.
  [[nodiscard]] long double set_total(const DegreeSet& lambda, std::size_t scale) const;

  /// omega - l; stabilizes at {0, 1, ...} for cofinite omega.
  [[nodiscard]] const DegreeSet& omega_minus(std::size_t l) const;

  /// Numeric s_n, e_n, v_n.
  [[nodiscard]] ClassWeights class_weights(std::size_t n) const;

  /// Largest marked orbit length used by the rejection V sampler.
  [[nodiscard]] std::size_t ell_max() const { return ell_max_; }
  [[nodiscard]] long double tail_bound() const { return tail_bound_; }

 private:
  BoltzmannContext(DegreeRestriction r, Singularity sing, NumericCounts counts)
      : restriction_(std::move(r)), sing_(std::move(sing)), counts_(std::move(counts)) {}

  DegreeRestriction restriction_;
  Singularity sing_;
  NumericCounts counts_;
  std::vector<std::vector<long double>> set_weights_;  // index = scale
  std::vector<DegreeSet> omega_minus_;
  std::size_t ell_max_ = 2;
  long double tail_bound_ = 0;
};

/// Cycle type (m_1, m_2, ...) of a symmetry of SET_lambda at scale i: index j
/// holds the number of j-cycles (index 0 unused). Drawn with probability
/// proportional to prod_j s_{ij}^{m_j} / (m_j! j^{m_j}) over sum_j j m_j in lambda.
std::vector<std::size_t> sample_set_partition(const BoltzmannContext& ctx, const DegreeSet& lambda,
                                              std::size_t scale, RandomSource& rng);

/// Unconditioned Polya-Boltzmann sampler for rooted trees at x = rho. With
/// max_size set, returns nullopt as soon as the tree grows past it.
std::optional<RootedTree> sample_rooted_symmetry(const BoltzmannContext& ctx, RandomSource& rng,
                                                 std::optional<std::size_t> max_size = std::nullopt);

/// Uniform rooted tree with n vertices and outdegrees in omega - 1.
RootedTree sample_polya_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng,
                              SamplingMethod method = SamplingMethod::conditioned,
                              std::uint64_t* attempts = nullptr);

CyclePointedTree sample_S_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng,
                                SamplingMethod method = SamplingMethod::conditioned);
CyclePointedTree sample_E_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng,
                                SamplingMethod method = SamplingMethod::conditioned);
CyclePointedTree sample_V_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng,
                                SamplingMethod method = SamplingMethod::conditioned);

/// Uniform unlabelled unrooted tree with n >= 2 vertices and degrees in omega:
/// picks S, E or V with probability s_n : e_n : v_n and projects.
CyclePointedTree sample_unrooted_exact(const BoltzmannContext& ctx, std::size_t n, RandomSource& rng,
                                       SamplingMethod method = SamplingMethod::conditioned);

/// Runs fn(RandomSource&, index) for index = 0..count-1 with stream_id = index,
/// spread over `threads` workers. Results are ordered by index, so the output
/// does not depend on the thread count.
template <class Fn>
auto replicate(std::size_t count, std::uint64_t seed, unsigned threads, Fn fn) {
  using R = decltype(fn(std::declval<RandomSource&>(), std::size_t{}));
  std::vector<R> out(count);
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < count; i += threads) {
      RandomSource rng(seed, i);
      out[i] = fn(rng, i);
    }
  };
  if (threads == 1) {
    work(0);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        work(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace polyaforge
