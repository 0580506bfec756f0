#include "polyaforge/limit_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyaforge/crt.hpp"

namespace polyaforge {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DiameterSample collect_diameters(const BoltzmannContext& ctx, std::size_t n, std::size_t count, std::uint64_t seed,
                                 SamplerOptions opts) {
  if (count < 1) throw std::invalid_argument("count must be positive");
  struct Draw {
    double diameter = 0;
    char cls = 'S';
    std::uint64_t attempts = 0;
  };
  auto draws = replicate(count, derive_seed(seed, n), opts.threads, [&](RandomSource& rng, std::size_t) {
    auto t = sample_unrooted_exact(ctx, n, rng, opts.method);
    return Draw{static_cast<double>(diameter(t.tree)), to_char(t.cls), t.attempts};
  });
  DiameterSample out;
  out.omega = ctx.restriction().omega;
  out.n = n;
  out.seed = seed;
  for (const auto& d : draws) {
    out.values.push_back(d.diameter);
    out.classes.push_back(d.cls);
    out.attempts.push_back(d.attempts);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw EmptySample("mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) throw InsufficientData("standard error needs two values");
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

ScalingCalibration calibrate_scaling(const std::vector<DiameterSample>& samples) {
  if (samples.empty()) throw EmptySample("no samples to calibrate");
  const double crt_mean = crt_diameter_moment(1).value;
  ScalingCalibration out;
  out.omega = samples.front().omega;
  double wsum = 0, acc = 0;
  for (const auto& s : samples) {
    const double m = mean(s.values);
    const double e = crt_mean * std::sqrt(static_cast<double>(s.n)) / m;
    const double se = e * standard_error(s.values) / m;
    out.per_n[s.n] = e;
    out.per_n_stderr[s.n] = se;
    const double w = 1 / (se * se);
    wsum += w;
    acc += w * e;
  }
  out.e_hat = acc / wsum;
  out.std_error = 1 / std::sqrt(wsum);
  return out;
}

double ks_distance(const DiameterSample& sample, double e_hat) {
  if (sample.values.empty()) throw EmptySample("KS distance of an empty sample");
  std::vector<double> v = sample.values;
  std::sort(v.begin(), v.end());
  const double scale = e_hat / std::sqrt(static_cast<double>(sample.n));
  const double N = static_cast<double>(v.size());
  double d = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double F = 1 - crt_diameter_tail(scale * v[i]).value;
    d = std::max({d, std::fabs(F - static_cast<double>(i) / N), std::fabs(F - static_cast<double>(j) / N)});
    i = j;
  }
  return d;
}

double rescaled_moment(const DiameterSample& sample, double e_hat, int k) {
  if (sample.values.empty()) throw EmptySample("moment of an empty sample");
  const double scale = e_hat / std::sqrt(static_cast<double>(sample.n));
  double acc = 0;
  for (double x : sample.values) acc += std::pow(scale * x, k);
  return acc / static_cast<double>(sample.values.size());
}

double sample_crt_diameter(RandomSource& rng) {
  const double u = rng.uniform();
  double lo = 0, hi = 20;
  for (int it = 0; it < 80; ++it) {
    const double mid = (lo + hi) / 2;
    (crt_diameter_tail(mid).value > u ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

TailFit fit_tail(const DiameterSample& sample) {
  if (sample.values.size() < 1000) throw InsufficientData("tail fit needs at least 1000 values");
  std::vector<double> v = sample.values;
  std::sort(v.begin(), v.end());
  const double N = static_cast<double>(v.size());
  std::vector<double> X, Y;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double surv = (N - static_cast<double>(i)) / N;  // P(D >= v[i])
    if (surv >= 1e-3 && surv <= 0.5) {
      X.push_back(v[i] * v[i] / static_cast<double>(sample.n));
      Y.push_back(std::log(surv));
    }
    i = j;
  }
  if (X.size() < 3) throw InsufficientData("fewer than three distinct values in the fitted survival range");
  const double mx = mean(X), my = mean(Y);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
    syy += (Y[i] - my) * (Y[i] - my);
  }
  if (sxx <= 0) throw InsufficientData("degenerate tail range");
  const double slope = sxy / sxx;
  TailFit out;
  out.c_hat = -slope;
  out.C_hat = std::exp(my - slope * mx);
  out.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  out.points = X.size();
  return out;
}

NeighborhoodDist neighborhood_census(const BoltzmannContext& ctx, std::size_t n, std::size_t k, std::size_t count,
                                     std::uint64_t seed, SamplerOptions opts, bool all_vertices) {
  if (k < 1) throw std::invalid_argument("radius must be at least 1");
  auto parts = replicate(count, derive_seed(seed, n), opts.threads, [&](RandomSource& rng, std::size_t) {
    auto t = sample_unrooted_exact(ctx, n, rng, opts.method).tree;
    NeighborhoodDist d;
    d.k = k;
    if (all_vertices) {
      for (std::size_t v = 0; v < t.size(); ++v) {
        ++d.counts[canonical_code(k_neighborhood(t, static_cast<Vertex>(v), k))];
      }
      d.total = t.size();
    } else {
      auto u = static_cast<Vertex>(rng.below(t.size()));
      ++d.counts[canonical_code(k_neighborhood(t, u, k))];
      d.total = 1;
    }
    return d;
  });
  auto out = merge(parts);
  out.k = k;
  return out;
}

NeighborhoodDist merge(const std::vector<NeighborhoodDist>& parts) {
  NeighborhoodDist out;
  for (const auto& p : parts) {
    if (out.total > 0 && p.k != out.k) throw RadiusMismatch("cannot merge censuses of different radii");
    out.k = p.k;
    for (const auto& [code, c] : p.counts) out.counts[code] += c;
    out.total += p.total;
  }
  return out;
}

double tv_distance(const NeighborhoodDist& d1, const NeighborhoodDist& d2) {
  if (d1.k != d2.k) throw RadiusMismatch("censuses have radii " + std::to_string(d1.k) + " and " +
                                         std::to_string(d2.k));
  if (d1.total == 0 || d2.total == 0) throw EmptySample("empty census");
  const double t1 = static_cast<double>(d1.total), t2 = static_cast<double>(d2.total);
  double acc = 0;
  auto a = d1.counts.begin();
  auto b = d2.counts.begin();
  while (a != d1.counts.end() || b != d2.counts.end()) {
    if (b == d2.counts.end() || (a != d1.counts.end() && a->first < b->first)) {
      acc += static_cast<double>(a->second) / t1;
      ++a;
    } else if (a == d1.counts.end() || b->first < a->first) {
      acc += static_cast<double>(b->second) / t2;
      ++b;
    } else {
      acc += std::fabs(static_cast<double>(a->second) / t1 - static_cast<double>(b->second) / t2);
      ++a;
      ++b;
    }
  }
  return acc / 2;
}

EDecayFit fit_e_decay(const CyclePointingCounts& counts, std::size_t n_min, std::size_t n_max) {
  n_max = std::min(n_max, counts.max_n());
  std::vector<double> X, Y;
  EDecayFit out;
  out.monotone = true;
  for (std::size_t n = std::max<std::size_t>(n_min, 2); n <= n_max; ++n) {
    if (n % 2 != 0 || counts.e[n] == 0 || counts.pointed[n] == 0) continue;
    const long double r = counts.e[n].convert_to<long double>() / counts.pointed[n].convert_to<long double>();
    const double y = static_cast<double>(std::log(r));
    if (!Y.empty() && !(y < Y.back())) out.monotone = false;
    X.push_back(static_cast<double>(n));
    Y.push_back(y);
  }
  if (X.size() < 3) throw InsufficientData("need at least three even sizes with e_n > 0");
  const double mx = mean(X), my = mean(Y);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  const double slope = sxy / sxx;
  out.gamma = std::exp(slope);
  out.log_C = -INFINITY;
  for (std::size_t i = 0; i < X.size(); ++i) out.log_C = std::max(out.log_C, Y[i] - X[i] * slope);
  out.points = X.size();
  return out;
}

}  // namespace polyaforge
