#include "udw/qfield/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace udw::qfield {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(what) + " must be finite and > 0, got " +
                            std::to_string(x));
  }
}

}  // namespace

void DetectorConfig::validate() const {
  require_positive(omega, "omega");
  require_positive(coupling, "coupling");
}

FieldProfile::FieldProfile(double e_bar) : e_bar_(e_bar) { require_positive(e_bar, "e_bar"); }

double FieldProfile::amplitude(double q) const {
  return std::exp(-q * q / (2.0 * e_bar_ * e_bar_)) / std::sqrt(e_bar_);
}

SwitchingProfile::SwitchingProfile(double t_bar) : t_bar_(t_bar) {
  require_positive(t_bar, "t_bar");
}

double SwitchingProfile::chi(double tau_bar) const {
  const double r = tau_bar / t_bar_;
  return std::exp(-0.5 * r * r) / (std::sqrt(2.0 * std::numbers::pi) * t_bar_);
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ClosedForm:
      return "closed_form";
    case Method::DopplerClosedForm:
      return "doppler_closed_form";
    case Method::Quadrature:
      return "quadrature";
  }
  return "unknown";
}

CoherenceResult make_result(std::complex<double> rho_over_g, double err, Method method) {
  CoherenceResult r;
  r.rho_coh_over_g = rho_over_g;
  r.c_over_g = 2.0 * std::abs(rho_over_g);
  r.err_estimate = err;
  r.method = method;
  return r;
}

}  // namespace udw::qfield
