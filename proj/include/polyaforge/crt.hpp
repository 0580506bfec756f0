#pragma once

#include <stdexcept>

namespace polyaforge {

class InvalidTolerance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TailEvaluation {
  double x = 0;
  double value = 1;  // P(D > x) for the CRT diameter D
  int terms_used = 0;
  double truncation_bound = 0;
};

struct MomentValue {
  int k = 0;
  double value = 0;
};

/// P(D > x) = sum_{k>=1} (k^2-1)(2/3 k^4 x^4 - 4 k^2 x^2 + 2) exp(-k^2 x^2 / 2),
/// summed until a certified bound on the remainder drops below tol. For
/// x < kTailSmallX the series cancels catastrophically; the value there is 1
/// up to far less than double precision.
TailEvaluation crt_diameter_tail(double x, double tol = 1e-15);
inline constexpr double kTailSmallX = 0.15;

/// E[D^k]: closed forms for k <= 3, otherwise
/// (2^{k/2}/3) k (k-1) (k-3) Gamma(k/2) (zeta(k-2) - zeta(k)).
MomentValue crt_diameter_moment(int k);

/// Constants c_r of E[D(tau_n)^r] ~ c_r lambda^{-r} n^{r/2} for unlabelled
/// trees with inner degree 3 (Broutin-Flajolet).
double broutin_flajolet_c(int r);

/// Riemann zeta at integers m >= 2: direct sum plus Euler-Maclaurin tail.
double zeta(int m, double tol = 1e-15);

/// Gamma(k/2) for k >= 1.
double gamma_half(int k);

/// k * integral_0^inf x^{k-1} P(D > x) dx by adaptive Gauss-Kronrod quadrature.
double tail_moment_integral(int k);

}  // namespace polyaforge
