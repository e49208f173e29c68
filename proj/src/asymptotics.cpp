#include "minsurf/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace minsurf {

double q_rate(double v) {
  if (!(v > 0.0)) throw std::domain_error("q_rate: v must be positive");
  return v * std::log(v) - v + 1.0;
}

double delta_k(int k) {
  if (k < 2) throw std::domain_error("delta_k: k must be at least 2");
  return q_rate((k - 1) / std::log(static_cast<double>(k)));
}

GammaAlpha gamma_alpha(int k, int j) {
  if (k < 2) throw std::domain_error("gamma_alpha: k must be at least 2");
  if (j < 1 || j > k) throw std::domain_error("gamma_alpha: j outside [1, k]");
  GammaAlpha ga;
  ga.gamma = k + 1 - j;
  ga.alpha_num = 2;
  ga.alpha_den = 2 * ga.gamma + 1;
  return ga;
}

double zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("zeta: s must exceed 1");
  constexpr int M = 10000;
  const long double sl = s;
  long double sum = 0.0L;
  for (int i = M - 1; i >= 1; --i) {  // ascending terms: small ones first
    sum += std::pow(static_cast<long double>(i), -sl);
  }
  const long double Ml = static_cast<long double>(M);
  sum += std::pow(Ml, 1.0L - sl) / (sl - 1.0L);
  sum += std::pow(Ml, -sl) / 2.0L;
  sum += sl * std::pow(Ml, -sl - 1.0L) / 12.0L;
  return static_cast<double>(sum);
}

double mean_main_coefficient(int k, int j) {
  const GammaAlpha ga = gamma_alpha(k, j);
  if (j < 2) {
    throw std::domain_error(
        "mean_main_coefficient: defined for j >= 2 only (j = 1 has no "
        "closed-form constant)");
  }
  const int g = ga.gamma;
  long double power = 1.0L;  // gamma^{2 gamma}
  for (int i = 0; i < 2 * g; ++i) power *= g;
  long double fact = 1.0L;  // (gamma + 1)!
  for (int i = 2; i <= g + 1; ++i) fact *= i;
  const long double z = zeta(1.0 + 1.0 / g);
  return static_cast<double>(power * z / fact);
}

double mean_main_term(int k, int j, double x) {
  if (!(x > 1.0)) throw std::domain_error("mean_main_term: x must exceed 1");
  const int g = gamma_alpha(k, j).gamma;
  const double c = mean_main_coefficient(k, j);
  return c * std::pow(x, 1.0 + 1.0 / g) / std::pow(std::log(x), g);
}

double iterated_log_envelope(double power, double rate, double x) {
  if (!(x >= 16.0)) {
    throw std::domain_error("envelope: x must be at least 16");
  }
  const double lx = std::log(x);
  return std::pow(x, power) /
         (std::pow(lx, rate) * std::pow(std::log(lx), 1.5));
}

double smallest_factor_envelope(int k, double x) {
  return iterated_log_envelope(1.0 + 1.0 / k, delta_k(k), x);
}

double top_prime_sum_main_term(int k, int j, double y) {
  if (!(y > 1.0)) {
    throw std::domain_error("top_prime_sum_main_term: y must exceed 1");
  }
  const int g = gamma_alpha(k, j).gamma;
  if (j < 2) throw std::domain_error("top_prime_sum_main_term: j must be >= 2");
  long double power = 1.0L;
  for (int i = 0; i < 2 * g; ++i) power *= g;
  long double fact = 1.0L;
  for (int i = 2; i <= g + 1; ++i) fact *= i;
  return static_cast<double>(power / fact) * std::pow(y, 1.0 + 1.0 / g) /
         std::pow(std::log(y), g);
}

Constants constants_for(int k, int j) {
  const GammaAlpha ga = gamma_alpha(k, j);
  Constants c;
  c.k = k;
  c.j = j;
  c.gamma = ga.gamma;
  c.alpha_num = ga.alpha_num;
  c.alpha_den = ga.alpha_den;
  c.delta = delta_k(k);
  if (j >= 2) c.coefficient = mean_main_coefficient(k, j);
  return c;
}

}  // namespace minsurf
