#pragma once
// Modified Bessel function of the first kind I_nu, plus a log-scale variant
// that stays finite for large arguments.  Supported orders: nu >= -1 with
// negative orders restricted to integers (I_{-n} = I_n).

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bmc {

namespace detail {

// Power series sum_{k>=0} (z^2/4)^k / (k! Gamma(nu+k+1)), scaled by (z/2)^nu.
// Terms whose Gamma factor blows up (nonpositive integer argument) vanish.
inline double bessel_i_series(double nu, double z) {
  double q = 0.25 * z * z;
  double sum = 0.0;
  double lg_prefix = nu * std::log(0.5 * z);
  for (int k = 0; k < 400; ++k) {
    double garg = nu + k + 1.0;
    if (garg <= 0.0 && garg == std::floor(garg)) continue;  // 1/Gamma == 0
    double lt = lg_prefix + k * std::log(q) - std::lgamma(k + 1.0) - std::lgamma(garg);
    double t = std::exp(lt);
    sum += t;
    if (k > 4 && t < sum * 1e-17) break;
  }
  return sum;
}

// For z > 30: exp(-z) I_nu(z) = (1/pi) int_0^pi exp(z(cos t - 1)) cos(nu t) dt
// up to a second term bounded by exp(-2z) relatively, which is dropped.
inline double bessel_i_scaled_integral(double nu, double z) {
  // Integrand decays like exp(-z t^2 / 2); resolve the peak near t = 0.
  int n = 4096;
  double h = 3.14159265358979323846 / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    double t = i * h;
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * std::exp(z * (std::cos(t) - 1.0)) * std::cos(nu * t);
  }
  return sum * h / 3.0 / 3.14159265358979323846;
}

// Large-z expansion  I_nu(z) ~ e^z / sqrt(2 pi z) * sum_k (-1)^k a_k(nu)/z^k.
// Reliable to ~1e-12 when z > 30 and 4 nu^2 < z.
inline double log_bessel_i_asymptotic(double nu, double z) {
  double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
    term *= -f;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    sum += term;
  }
  return z - 0.5 * std::log(2.0 * 3.14159265358979323846 * z) + std::log(sum);
}

}  // namespace detail

// log I_nu(z) for z > 0.
inline double log_modified_bessel_i(double nu, double z) {
  if (!(z > 0.0)) throw std::domain_error("log_modified_bessel_i: need z > 0");
  if (nu < 0.0) {
    if (nu != std::floor(nu)) throw std::domain_error("modified_bessel_i: negative non-integer order");
    nu = -nu;
  }
  if (z <= 30.0) {
    double s = detail::bessel_i_series(nu, z);
    return std::log(s);
  }
  if (4.0 * nu * nu < z) return detail::log_bessel_i_asymptotic(nu, z);
  return z + std::log(detail::bessel_i_scaled_integral(nu, z));
}

inline double modified_bessel_i(double nu, double z) {
  if (z == 0.0) {
    if (nu == 0.0) return 1.0;
    return 0.0;
  }
  return std::exp(log_modified_bessel_i(nu, z));
}

}  // namespace bmc
