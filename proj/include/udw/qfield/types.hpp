#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace udw::qfield {

/// Detector gap Omega (inverse time units) and dimensionless coupling g.
/// Every evaluator works in units where Omega = 1 and reports C/g; this type
/// only matters at the raw-unit boundary and for the perturbative check.
struct DetectorConfig {
  double omega = 1.0;
  double coupling = 1.0;

  /// Throws std::domain_error unless omega > 0 and coupling > 0 (both finite).
  void validate() const;
};

/// Gaussian coherent amplitude a(q) = exp(-q^2 / (2 E^2)) / sqrt(E), with
/// reduced field energy E/Omega.
class FieldProfile {
 public:
  explicit FieldProfile(double e_bar);
  double e_bar() const noexcept { return e_bar_; }
  /// a(q) in reduced units.
  double amplitude(double q) const;

 private:
  double e_bar_;
};

/// Unit-normalized Gaussian switching of reduced width Omega*T.
class SwitchingProfile {
 public:
  explicit SwitchingProfile(double t_bar);
  double t_bar() const noexcept { return t_bar_; }
  /// chi(tau) = exp(-tau^2 / (2 T^2)) / sqrt(2 pi T^2).
  double chi(double tau_bar) const;
  /// Half width of the integration window, 8 T. The switching mass outside
  /// it is erfc(8 / sqrt 2) < e^(-32).
  double window_half_width() const noexcept { return kWindowWidths * t_bar_; }

  static constexpr double kWindowWidths = 8.0;

 private:
  double t_bar_;
};

enum class Method { ClosedForm, DopplerClosedForm, Quadrature };

std::string_view to_string(Method m);

struct CoherenceResult {
  double c_over_g = 0.0;                     ///< l1-norm coherence C/g
  std::complex<double> rho_coh_over_g{};     ///< off-diagonal amplitude rho_coh/g
  double err_estimate = 0.0;                 ///< absolute bound on c_over_g
  Method method = Method::ClosedForm;
  std::vector<std::string> warnings;
};

/// Builds a result whose c_over_g is exactly 2|rho|.
CoherenceResult make_result(std::complex<double> rho_over_g, double err, Method method);

}  // namespace udw::qfield
