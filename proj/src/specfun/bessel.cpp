#include "udw/specfun/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "udw/specfun/gamma.hpp"

namespace udw::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double scaled_series(double nu, double z) {
  const double half = 0.5 * z;
  const double quarter_sq = half * half;
  double term = std::exp(nu * std::log(half) - z - log_gamma_real(nu + 1.0));
  double sum = term;
  for (int m = 1; m < 100000; ++m) {
    term *= quarter_sq / (m * (m + nu));
    sum += term;
    // Terms peak near m ~ z/2 and decay monotonically afterwards.
    if (term < 0.25 * kEps * sum && m > half) break;
  }
  return sum;
}

double scaled_asymptotic(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev_abs = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 1000; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * z);
    const double next_abs = std::abs(next);
    if (next_abs >= prev_abs) break;  // divergent tail begins
    term = next;
    sum += term;
    prev_abs = next_abs;
    if (next_abs < 0.25 * kEps * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

double bessel_i_scaled(double nu, double z) {
  if (std::isnan(nu) || !(nu > -1.0)) {
    throw std::domain_error("bessel_i_scaled: order must be > -1, got " + std::to_string(nu));
  }
  if (std::isnan(z) || !(z > 0.0)) {
    throw std::domain_error("bessel_i_scaled: argument must be > 0, got " + std::to_string(z));
  }
  if (std::isinf(z)) return 0.0;
  if (z > kBesselSeriesSwitchover && nu * nu < z) return scaled_asymptotic(nu, z);
  return scaled_series(nu, z);
}

}  // namespace udw::specfun
