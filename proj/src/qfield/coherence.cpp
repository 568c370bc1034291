#include "udw/qfield/coherence.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "udw/specfun/bessel.hpp"
#include "udw/specfun/quadrature.hpp"

namespace udw::qfield {

namespace {

constexpr double kPi = std::numbers::pi;

// Two kernels of magnitude <= G(0), weighted by the switching mass outside
// the +-8T window.
double window_tail_bound() { return 2.0 * kKernelAtOrigin * std::erfc(8.0 / std::numbers::sqrt2); }

double clamp_reduced(double x, const char* name, std::vector<std::string>& warnings) {
  if (x < kMinReducedParameter) {
    std::ostringstream os;
    os << name << " = " << x << " clamped to " << kMinReducedParameter;
    warnings.push_back(os.str());
    return kMinReducedParameter;
  }
  return x;
}

void check_rel_tol(double rel_tol) {
  if (!(rel_tol >= 1e-10 && rel_tol <= 1e-2)) {
    throw std::invalid_argument("rel_tol must lie in [1e-10, 1e-2], got " +
                                std::to_string(rel_tol));
  }
}

// Closed form after clamping; returns C0/g.
double rest_closed_form_value(double e, double t) {
  const double et2 = e * e * t * t;
  const double denom = 1.0 + et2;
  const double z = et2 * t * t / (4.0 * denom);
  const double prefactor = std::sqrt(4.0 * kPi * e * t * t / denom);
  // -(T^2/2)(1 - E^2T^2/(2(1+E^2T^2))) + z  ==  -T^2 / (2 (1 + E^2 T^2))
  const double exponent = -t * t / (2.0 * denom);
  return prefactor * std::exp(exponent) * specfun::bessel_i_scaled(-0.25, z);
}

CoherenceResult closed_form_result(double c, Method method) {
  // rho_coh is purely negative-imaginary at rest: the tau integral of chi(tau)
  // cos(tau) G(E tau) is the transform of a positive-definite function.
  auto r = make_result({0.0, -0.5 * c}, kClosedFormRelError * c, method);
  return r;
}

}  // namespace

double weak_field_limit(double t_bar) { return kShortTimeLimit * std::exp(-0.5 * t_bar * t_bar); }

CoherenceResult coherence_rest_closed_form(const FieldProfile& field,
                                           const SwitchingProfile& switching) {
  std::vector<std::string> warnings;
  const double e = clamp_reduced(field.e_bar(), "e_bar", warnings);
  const double t = clamp_reduced(switching.t_bar(), "t_bar", warnings);
  auto r = closed_form_result(rest_closed_form_value(e, t), Method::ClosedForm);
  r.warnings = std::move(warnings);
  return r;
}

CoherenceResult coherence_velocity_closed_form(const FieldProfile& field,
                                               const SwitchingProfile& switching,
                                               const ConstantVelocity& motion) {
  std::vector<std::string> warnings;
  const double e = clamp_reduced(field.e_bar(), "e_bar", warnings);
  const double t = clamp_reduced(switching.t_bar(), "t_bar", warnings);
  const double v = motion.upsilon();
  const double red = std::sqrt((1.0 - v) / (1.0 + v));
  const double blue = std::sqrt((1.0 + v) / (1.0 - v));
  // Sum in a fixed order of the two factors so v and -v give identical bits.
  const double lo = std::min(red, blue);
  const double hi = std::max(red, blue);
  const double c = 0.5 * (rest_closed_form_value(e * lo, t) +
                          rest_closed_form_value(e * hi, t));
  auto r = closed_form_result(c, Method::DopplerClosedForm);
  r.warnings = std::move(warnings);
  return r;
}

CoherenceResult coherence_numeric_with_kernel(
    const Trajectory& traj, const SwitchingProfile& switching,
    const std::function<double(double u, double v)>& kernel, double rel_tol,
    double kernel_abs_error) {
  check_rel_tol(rel_tol);
  std::vector<std::string> warnings;
  const SwitchingProfile sw(clamp_reduced(switching.t_bar(), "t_bar", warnings));
  const double half = sw.window_half_width();

  auto integrand = [&](double tau) -> std::complex<double> {
    const LightconeCoords lc = lightcone_coords(traj, tau);
    const double weight = sw.chi(tau) * kernel(lc.u, lc.v);
    return {weight * std::cos(tau), weight * std::sin(tau)};
  };

  // Kernel error enters through integral of chi <= 1; the factor 2 maps the
  // error on rho to the error on C.
  const double extra = kernel_abs_error + window_tail_bound();
  auto to_result = [&](const specfun::ComplexQuadratureResult& q) {
    const std::complex<double> rho = std::complex<double>(0.0, -1.0) * q.value;
    auto r = make_result(rho, 2.0 * (q.err_estimate + extra), Method::Quadrature);
    r.warnings = warnings;
    return r;
  };

  try {
    const auto q = specfun::integrate_adaptive(specfun::ComplexFunction(integrand), -half, half,
                                               rel_tol, 0.0);
    return to_result(q);
  } catch (const specfun::ComplexQuadratureError& err) {
    std::ostringstream os;
    os << "coherence quadrature did not converge for trajectory " << trajectory_tag(traj)
       << ", t_bar = " << sw.t_bar();
    if (const auto* acc = std::get_if<UniformAcceleration>(&traj)) {
      os << " (a_bar * t_bar = " << acc->a_bar() * sw.t_bar() << ")";
    }
    os << ": " << err.what();
    throw CoherenceError(os.str(), to_result(err.best()));
  }
}

CoherenceResult coherence_numeric(const Trajectory& traj, const FieldProfile& field,
                                  const SwitchingProfile& switching, double rel_tol) {
  std::vector<std::string> warnings;
  const double e = clamp_reduced(field.e_bar(), "e_bar", warnings);
  const KernelTable& table = KernelTable::instance();
  auto kernel = [&table, e](double u, double v) { return table(e * u) + table(e * v); };
  try {
    auto r = coherence_numeric_with_kernel(traj, switching, kernel, rel_tol,
                                           2.0 * KernelTable::kAbsErrorBound);
    r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());
    return r;
  } catch (const CoherenceError& err) {
    std::ostringstream os;
    os << err.what() << " [e_bar = " << e << "]";
    throw CoherenceError(os.str(), err.best());
  }
}

CoherenceResult coherence_accelerated(const FieldProfile& field,
                                      const SwitchingProfile& switching,
                                      const UniformAcceleration& motion, double rel_tol) {
  return coherence_numeric(Trajectory{motion}, field, switching, rel_tol);
}

CoherenceResult evaluate(const Trajectory& traj, const FieldProfile& field,
                         const SwitchingProfile& switching, double rel_tol) {
  if (std::holds_alternative<Rest>(traj)) return coherence_rest_closed_form(field, switching);
  if (const auto* v = std::get_if<ConstantVelocity>(&traj)) {
    return coherence_velocity_closed_form(field, switching, *v);
  }
  return coherence_numeric(traj, field, switching, rel_tol);
}

double doppler_amplitude(double e_bar, double upsilon, double q) {
  const ConstantVelocity motion(upsilon);
  const FieldProfile field(e_bar);
  const double g = motion.lorentz_gamma();
  const FieldProfile red(e_bar * g * (1.0 - upsilon));
  const FieldProfile blue(e_bar * g * (1.0 + upsilon));
  return 0.5 * (red.amplitude(q) + blue.amplitude(q));
}

double effective_initial_energy(double e_bar, double upsilon) {
  const ConstantVelocity motion(upsilon);
  const FieldProfile field(e_bar);
  const double v2 = upsilon * upsilon;
  return 0.5 * e_bar * (motion.lorentz_gamma() + (1.0 - v2) / (1.0 + v2));
}

void check_perturbative(const DetectorConfig& detector, CoherenceResult& result) {
  const double c = detector.coupling * result.c_over_g;
  if (c > kPerturbativeWarningLevel) {
    std::ostringstream os;
    os << "coupling * C/g = " << c << " exceeds " << kPerturbativeWarningLevel
       << "; second-order perturbation theory may be unreliable";
    result.warnings.push_back(os.str());
  }
}

CoherenceResult evaluate_physical(const DetectorConfig& detector, const PhysicalInputs& inputs,
                                  double rel_tol) {
  detector.validate();
  if (inputs.velocity && inputs.acceleration) {
    throw std::invalid_argument("at most one of velocity and acceleration may be given");
  }
  const FieldProfile field(inputs.energy / detector.omega);
  const SwitchingProfile switching(detector.omega * inputs.duration);
  Trajectory traj = Rest{};
  if (inputs.velocity) traj = ConstantVelocity(*inputs.velocity);
  if (inputs.acceleration) traj = UniformAcceleration(*inputs.acceleration / detector.omega);
  auto r = evaluate(traj, field, switching, rel_tol);
  check_perturbative(detector, r);
  return r;
}

}  // namespace udw::qfield
