#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "polyaforge/boltzmann.hpp"
#include "polyaforge/enumeration.hpp"
#include "polyaforge/tree.hpp"

namespace polyaforge {

class EmptySample : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RadiusMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// splitmix64 of (seed, tag); gives each sample size its own seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

struct DiameterSample {
  DegreeSet omega;
  std::size_t n = 0;
  std::vector<double> values;  // diameters (integers for sampled trees)
  std::uint64_t seed = 0;
  std::vector<char> classes;             // S, E or V per draw
  std::vector<std::uint64_t> attempts;   // sampler attempts per draw
};

struct SamplerOptions {
  unsigned threads = 1;
  SamplingMethod method = SamplingMethod::conditioned;
};

/// Replicate i uses RandomSource(derive_seed(seed, n), i).
DiameterSample collect_diameters(const BoltzmannContext& ctx, std::size_t n, std::size_t count, std::uint64_t seed,
                                 SamplerOptions opts = {});

double mean(const std::vector<double>& v);
/// Standard error of the mean.
double standard_error(const std::vector<double>& v);

struct ScalingCalibration {
  DegreeSet omega;
  double e_hat = 0;
  double std_error = 0;
  std::map<std::size_t, double> per_n;         // e(n) = E[D_CRT] sqrt(n) / mean D_n
  std::map<std::size_t, double> per_n_stderr;  // delta method
};

/// Inverse-variance weighted combination of the per-size estimates.
ScalingCalibration calibrate_scaling(const std::vector<DiameterSample>& samples);

/// sup_x |F_emp(x) - F(x)| for x = e_hat D / sqrt(n) against F = 1 - P(D_CRT > .).
double ks_distance(const DiameterSample& sample, double e_hat);

/// Empirical E[(e_hat D / sqrt n)^k].
double rescaled_moment(const DiameterSample& sample, double e_hat, int k);

/// Inverse-transform draw from the CRT diameter law.
double sample_crt_diameter(RandomSource& rng);

struct TailFit {
  double C_hat = 0, c_hat = 0, r2 = 0;
  std::size_t points = 0;
};

/// Least squares of log P(D >= x) against x^2/n over survival in [1e-3, 0.5].
TailFit fit_tail(const DiameterSample& sample);

struct NeighborhoodDist {
  std::size_t k = 0;
  std::map<CanonicalCode, std::uint64_t> counts;
  std::uint64_t total = 0;
};

/// One uniform vertex per tree, or every vertex of every tree when
/// all_vertices is set (same law, lower variance).
NeighborhoodDist neighborhood_census(const BoltzmannContext& ctx, std::size_t n, std::size_t k, std::size_t count,
                                     std::uint64_t seed, SamplerOptions opts = {}, bool all_vertices = false);

NeighborhoodDist merge(const std::vector<NeighborhoodDist>& parts);

double tv_distance(const NeighborhoodDist& d1, const NeighborhoodDist& d2);

struct EDecayFit {
  double gamma = 0;        // exp of the fitted slope of log(e_n / (n f_n))
  double log_C = 0;        // max over fitted n of log r_n - n log gamma
  bool monotone = false;   // r_n strictly decreasing over the even n used
  std::size_t points = 0;
};

/// Fits the even-n ratios e_n / (n f_n) for n in [n_min, n_max].
EDecayFit fit_e_decay(const CyclePointingCounts& counts, std::size_t n_min, std::size_t n_max);

}  // namespace polyaforge
