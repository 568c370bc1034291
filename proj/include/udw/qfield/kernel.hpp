#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace udw::qfield {

/// G(0) = Gamma(1/4) 2^(1/4) / (2 sqrt(pi)).
inline constexpr double kKernelAtOrigin = 1.2162802142575202831;

/// Universal field kernel
///
///   G(y) = pi^(-1/2) * integral_0^inf exp(-p^2/2) p^(-1/2) cos(y p) dp,
///
/// evaluated by direct quadrature after the substitution p = w^2. This is
/// the ground truth the tabulated kernel is built from and checked against.
double kernel_direct(double y, double rel_tol = 1e-13);

/// Derivative G'(y) by direct quadrature.
double kernel_derivative_direct(double y, double rel_tol = 1e-13);

/// Tabulated G(y). Cubic Hermite interpolation on a uniform grid over
/// [0, kMaxTabulated] using quadrature values and derivatives at the nodes;
/// beyond it the large-argument expansion
///
///   G(y) ~ (2y)^(-1/2) * sum_n (1/4)_n (3/4)_n / n! * (2 / y^2)^n
///
/// is summed to its smallest term (the neglected part is O(exp(-y^2/2))).
/// Built once on first use, immutable afterwards, safe to share.
class KernelTable {
 public:
  static constexpr double kMaxTabulated = 16.0;
  static constexpr std::size_t kIntervals = 2048;
  /// Absolute error bound on operator() over the whole real line: the
  /// Hermite remainder h^4 max|G''''| / 384 with max|G''''| <= 1.6.
  static constexpr double kAbsErrorBound = 2e-11;

  static const KernelTable& instance();

  /// G(|y|); returns 0 for infinite y.
  double operator()(double y) const;

  std::size_t nodes() const noexcept { return values_.size(); }

 private:
  KernelTable();

  double step_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Large-argument expansion of G, valid (to double precision) for y >= 10.
double kernel_asymptotic(double y);

/// G(E, s) = G(E s): the light-cone kernel for reduced field energy E.
/// Throws std::domain_error unless e_bar > 0.
double field_kernel(double e_bar, double s);

/// pi^(-1/2) * integral_0^inf a(q) q^(-1/2) cos(q s) dq for an arbitrary
/// smooth, rapidly decaying amplitude a(q), by direct singularity-absorbing
/// quadrature. With the Gaussian amplitude this reproduces field_kernel.
double field_kernel_for_amplitude(const std::function<double(double)>& amplitude, double s,
                                  double rel_tol = 1e-12);

}  // namespace udw::qfield
