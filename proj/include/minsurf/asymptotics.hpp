#pragma once

#include <optional>

namespace minsurf {

// Q(v) = v log v - v + 1: the large-deviation rate function controlling how
// rarely an integer has a divisor in a given dyadic window.  Convex, with
// minimum Q(1) = 0.
double q_rate(double v);

// delta_k = Q((k-1)/log k).  delta_2 is the classical divisor-density
// exponent delta = 1 - (1 + log log 2)/log 2 ~ 0.086071.
double delta_k(int k);

// gamma = k+1-j and the threshold exponent alpha_j = 1/(gamma + 1/2),
// kept as the exact rational 2/(2*gamma + 1).
struct GammaAlpha {
  int gamma = 0;
  int alpha_num = 0;
  int alpha_den = 0;

  double alpha() const {
    return static_cast<double>(alpha_num) / static_cast<double>(alpha_den);
  }
};
GammaAlpha gamma_alpha(int k, int j);

// Riemann zeta on (1, inf): truncated series plus the Euler-Maclaurin tail
//   M^{1-s}/(s-1) + M^{-s}/2 + s M^{-s-1}/12   with M = 10^4,
// giving absolute error well under 1e-10 over the exponents used here.
double zeta(double s);

// C_{k,j} = gamma^{2 gamma} zeta(1 + 1/gamma) / (gamma+1)!  for j >= 2.
// Depends on (k, j) only through gamma.
double mean_main_coefficient(int k, int j);

// C_{k,j} x^{1+1/gamma} / (log x)^gamma: the mean-value main term for the
// j-th smallest side, j >= 2.  Requires x > 1 so log x > 0.
double mean_main_term(int k, int j, double x);

// x^{power} / ((log x)^{rate} (log log x)^{3/2}).  Shared shape of the
// j = 1 envelope and the windowed-divisor density; only ratios against it
// are meaningful.  Requires x >= 16, clear of the log log x singularity.
double iterated_log_envelope(double power, double rate, double x);

// Envelope for sum_{n<=x} rho_1(n): x^{1+1/k}/((log x)^{delta_k}(log log x)^{3/2}).
// The theorem behind it is two-sided up to unspecified k-dependent
// constants, so callers report exact/envelope ratios only.
double smallest_factor_envelope(int k, double x);

// gamma^{2 gamma} y^{1+1/gamma} / ((gamma+1)! (log y)^gamma): main term of
// the prime-anchored sum T_j(y) (no zeta factor).  Requires y > 1.
double top_prime_sum_main_term(int k, int j, double y);

// Bundle of every constant attached to a pair (k, j).  coefficient is
// absent for j = 1, where the mean value has no closed-form constant.
struct Constants {
  int k = 0;
  int j = 0;
  int gamma = 0;
  int alpha_num = 0;
  int alpha_den = 0;
  double delta = 0.0;
  std::optional<double> coefficient;
};
Constants constants_for(int k, int j);

}  // namespace minsurf
