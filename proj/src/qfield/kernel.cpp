#include "udw/qfield/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "udw/specfun/quadrature.hpp"

namespace udw::qfield {

namespace {

// exp(-w^4 / 2) < 1e-24 beyond this, so truncating the w-integral here is
// invisible at double precision.
constexpr double kWindowW = 3.25;
constexpr double kInvSqrtPi = 0.5641895835477562869;  // 1/sqrt(pi)

}  // namespace

double kernel_direct(double y, double rel_tol) {
  auto integrand = [y](double w) {
    const double p = w * w;
    return 2.0 * std::exp(-0.5 * p * p) * std::cos(y * p);
  };
  const auto r = specfun::integrate_adaptive(specfun::RealFunction(integrand), 0.0, kWindowW,
                                             rel_tol, 1e-17);
  return kInvSqrtPi * r.value;
}

double kernel_derivative_direct(double y, double rel_tol) {
  auto integrand = [y](double w) {
    const double p = w * w;
    return -2.0 * p * std::exp(-0.5 * p * p) * std::sin(y * p);
  };
  const auto r = specfun::integrate_adaptive(specfun::RealFunction(integrand), 0.0, kWindowW,
                                             rel_tol, 1e-17);
  return kInvSqrtPi * r.value;
}

double kernel_asymptotic(double y) {
  y = std::abs(y);
  if (std::isinf(y)) return 0.0;
  const double inv_x = 2.0 / (y * y);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < 400; ++n) {
    const double next = term * (n + 0.25) * (n + 0.75) / (n + 1.0) * inv_x;
    if (next >= term) break;  // past the smallest term
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * y);
}

KernelTable::KernelTable()
    : step_(kMaxTabulated / static_cast<double>(kIntervals)),
      values_(kIntervals + 1),
      slopes_(kIntervals + 1) {
  for (std::size_t i = 0; i <= kIntervals; ++i) {
    const double y = step_ * static_cast<double>(i);
    values_[i] = kernel_direct(y, 1e-14);
    slopes_[i] = i == 0 ? 0.0 : kernel_derivative_direct(y, 1e-14);
  }
}

const KernelTable& KernelTable::instance() {
  static const KernelTable table;
  return table;
}

double KernelTable::operator()(double y) const {
  y = std::abs(y);
  if (y >= kMaxTabulated) return kernel_asymptotic(y);
  const double pos = y / step_;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= kIntervals) i = kIntervals - 1;
  const double t = pos - static_cast<double>(i);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] +
         h11 * step_ * slopes_[i + 1];
}

double field_kernel(double e_bar, double s) {
  if (!(e_bar > 0.0) || !std::isfinite(e_bar)) {
    throw std::domain_error("field_kernel: e_bar must be finite and > 0, got " +
                            std::to_string(e_bar));
  }
  return KernelTable::instance()(e_bar * s);
}

double field_kernel_for_amplitude(const std::function<double(double)>& amplitude, double s,
                                  double rel_tol) {
  auto g = [&](double q) { return amplitude(q) * std::cos(q * s); };
  const auto r =
      specfun::integrate_halfline_sqrt_singularity(specfun::RealFunction(g), rel_tol, 1e-17);
  return kInvSqrtPi * r.value;
}

}  // namespace udw::qfield
