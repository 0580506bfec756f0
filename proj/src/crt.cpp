#include "polyaforge/crt.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

namespace polyaforge {

namespace {

// |term_k| <= g(k) = k^2 (2/3 k^4 x^4 + 4 k^2 x^2 + 2) exp(-k^2 x^2 / 2)
long double envelope(long double k, long double x2) {
  long double k2 = k * k;
  return k2 * (2.0L / 3.0L * k2 * k2 * x2 * x2 + 4.0L * k2 * x2 + 2.0L) * std::exp(-k2 * x2 / 2.0L);
}

}  // namespace

TailEvaluation crt_diameter_tail(double x, double tol) {
  if (!(tol > 0) || !std::isfinite(tol)) throw InvalidTolerance("tolerance must be positive and finite");
  if (!(x >= 0) || !std::isfinite(x)) throw InvalidArgument("x must be finite and non-negative");
  TailEvaluation out;
  out.x = x;
  if (x < kTailSmallX) return out;

  const long double x2 = static_cast<long double>(x) * x;
  long double sum = 0;
  int k = 2;
  for (;; ++k) {
    long double kk = k;
    long double k2 = kk * kk;
    sum += (k2 - 1) * (2.0L / 3.0L * k2 * k2 * x2 * x2 - 4.0L * k2 * x2 + 2.0L) * std::exp(-k2 * x2 / 2.0L);
    // g(j+1)/g(j) <= ((j+1)/j)^6 exp(-(2j+1) x^2 / 2), decreasing in j
    long double next = kk + 1;
    long double q = std::pow(next / kk, 6.0L) * std::exp(-(2.0L * next + 1.0L) * x2 / 2.0L);
    if (q < 1) {
      long double bound = envelope(next, x2) / (1 - q);
      if (bound < tol) {
        out.truncation_bound = static_cast<double>(bound);
        break;
      }
    }
    if (k > 10000000) throw InvalidTolerance("tail series did not reach tolerance");
  }
  out.terms_used = k - 1;
  out.value = static_cast<double>(std::clamp(sum, 0.0L, 1.0L));
  return out;
}

double gamma_half(int k) {
  if (k < 1) throw InvalidArgument("gamma_half needs k >= 1");
  long double g;
  long double v;
  if (k % 2 == 0) {
    g = 1;
    v = 1;
  } else {
    g = std::sqrt(std::numbers::pi_v<long double>);
    v = 0.5L;
  }
  for (; v < k / 2.0L; v += 1) g *= v;
  return static_cast<double>(g);
}

double zeta(int m, double tol) {
  if (m < 2) throw InvalidArgument("zeta needs m >= 2, got " + std::to_string(m));
  if (!(tol > 0)) throw InvalidTolerance("tolerance must be positive");
  static constexpr long double bernoulli[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66,
                                              -691.0L / 2730, 7.0L / 6};
  for (int N = 16;; N *= 2) {
    long double sum = 0;
    for (int n = N - 1; n >= 1; --n) sum += std::pow(static_cast<long double>(n), -m);
    const long double NN = N;
    sum += std::pow(NN, 1 - m) / (m - 1) + std::pow(NN, -m) / 2;
    long double last = 0;
    long double factorial = 1;  // (2j)!
    long double rising = m;     // m (m+1) ... (m+2j-2)
    for (int j = 1; j <= 7; ++j) {
      factorial *= (2 * j - 1) * (2 * j);
      if (j > 1) rising *= (m + 2 * j - 3) * (m + 2 * j - 2);
      last = bernoulli[j - 1] / factorial * rising * std::pow(NN, -m - 2 * j + 1);
      sum += last;
    }
    if (std::fabs(last) < tol || N > (1 << 20)) return static_cast<double>(sum);
  }
}

MomentValue crt_diameter_moment(int k) {
  if (k < 1) throw InvalidArgument("moment order must be positive");
  const double pi = std::numbers::pi;
  double v;
  switch (k) {
    case 1: v = 4.0 / 3.0 * std::sqrt(pi / 2); break;
    case 2: v = 2.0 / 3.0 * (1 + pi * pi / 3); break;
    case 3: v = 2 * std::sqrt(2 * pi); break;
    default:
      v = std::pow(2.0, k / 2.0) / 3.0 * k * (k - 1) * (k - 3) * gamma_half(k) * (zeta(k - 2) - zeta(k));
  }
  return {k, v};
}

double broutin_flajolet_c(int r) {
  if (r < 1) throw InvalidArgument("r must be positive");
  const double pi = std::numbers::pi;
  switch (r) {
    case 1: return 8.0 / 3.0 * std::sqrt(pi);
    case 2: return 16.0 / 3.0 * (1 + pi * pi / 3);
    case 3: return 64 * std::sqrt(pi);
    default: return std::pow(4.0, r) / 3.0 * r * (r - 1) * (r - 3) * gamma_half(r) * (zeta(r - 2) - zeta(r));
  }
}

double tail_moment_integral(int k) {
  if (k < 1) throw InvalidArgument("moment order must be positive");
  auto f = [k](double x) { return k * std::pow(x, k - 1) * crt_diameter_tail(x, 1e-17).value; };
  // P(D > 16) is below 1e-50; split at the small-x cutoff where the integrand is 1 * x^{k-1}.
  const double head = std::pow(kTailSmallX, k);
  return head + boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, kTailSmallX, 16.0, 20, 1e-14);
}

}  // namespace polyaforge
