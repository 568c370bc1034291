#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "udw/qfield/kernel.hpp"
#include "udw/qfield/trajectory.hpp"
#include "udw/qfield/types.hpp"

namespace udw::qfield {

/// Short-interaction limit of C/g, common to every worldline:
/// 4 G(0) = sqrt(4 pi) 8^(1/4) / Gamma(3/4).
inline constexpr double kShortTimeLimit = 4.0 * kKernelAtOrigin;

/// Weak-field limit of the rest-frame coherence at fixed duration:
/// kShortTimeLimit * exp(-t_bar^2 / 2).
double weak_field_limit(double t_bar);

/// Reduced energies and durations below this are clamped (with a warning).
inline constexpr double kMinReducedParameter = 1e-6;

/// Relative error attached to closed-form results (scaled Bessel accuracy).
inline constexpr double kClosedFormRelError = 1e-10;

/// coupling * C/g above this attaches a perturbative-validity warning.
inline constexpr double kPerturbativeWarningLevel = 0.1;

/// Numerical evaluation failed to converge. `best()` holds the estimate
/// reached and its error bound.
class CoherenceError : public std::runtime_error {
 public:
  CoherenceError(const std::string& what, CoherenceResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const CoherenceResult& best() const noexcept { return best_; }

 private:
  CoherenceResult best_;
};

/// Closed-form rest-frame coherence
///
///   C0/g = sqrt(4 pi E T^2 / (1 + E^2 T^2)) * exp(-T^2 / (2 (1 + E^2 T^2)))
///          * [exp(-z) I_{-1/4}(z)],   z = E^2 T^4 / (4 (1 + E^2 T^2)),
///
/// with the Bessel growth factor folded into the exponent, so
/// nothing overflows for large E T.
CoherenceResult coherence_rest_closed_form(const FieldProfile& field,
                                           const SwitchingProfile& switching);

/// Inertial detector as the equal-weight average of two Doppler-shifted rest
/// results at E sqrt((1 -+ v)/(1 +- v)).
CoherenceResult coherence_velocity_closed_form(const FieldProfile& field,
                                               const SwitchingProfile& switching,
                                               const ConstantVelocity& motion);

/// rho_coh/g = -i * integral chi(tau) e^(i tau) [G(E u(tau)) + G(E v(tau))] dtau
/// over |tau| <= 8 T, with C/g = 2 |rho_coh/g|. Works for every trajectory.
///
/// rel_tol must lie in [1e-10, 1e-2]. Throws CoherenceError (naming the
/// parameters) when the tau quadrature does not converge.
CoherenceResult coherence_numeric(const Trajectory& traj, const FieldProfile& field,
                                  const SwitchingProfile& switching, double rel_tol);

/// coherence_numeric on the hyperbolic worldline.
CoherenceResult coherence_accelerated(const FieldProfile& field,
                                      const SwitchingProfile& switching,
                                      const UniformAcceleration& motion, double rel_tol);

/// Same tau integral with a caller-supplied kernel K(u, v) replacing
/// G(E u) + G(E v). Used to check alternative amplitude profiles.
CoherenceResult coherence_numeric_with_kernel(
    const Trajectory& traj, const SwitchingProfile& switching,
    const std::function<double(double u, double v)>& kernel, double rel_tol,
    double kernel_abs_error = 0.0);

/// Cheapest valid evaluator: closed form at rest, Doppler closed form for
/// constant velocity, quadrature under acceleration.
CoherenceResult evaluate(const Trajectory& traj, const FieldProfile& field,
                         const SwitchingProfile& switching, double rel_tol);

/// Doppler-averaged amplitude
/// a'(q) = (exp(-q^2/(2 E-^2)) / sqrt(E-) + exp(-q^2/(2 E+^2)) / sqrt(E+)) / 2,
/// E-+ = E gamma (1 -+ v).
double doppler_amplitude(double e_bar, double upsilon, double q);

/// Initial field energy seen by the inertial detector,
/// E_v = (E/2) (gamma + (1 - v^2)/(1 + v^2)). Diagnostic only.
double effective_initial_energy(double e_bar, double upsilon);

/// Inputs in raw units (Omega from the DetectorConfig). At most one of
/// velocity / acceleration may be set.
struct PhysicalInputs {
  double energy = 0.0;
  double duration = 0.0;
  std::optional<double> velocity;
  std::optional<double> acceleration;
};

/// Converts to reduced units (E/Omega, Omega T, a/Omega), evaluates, and
/// attaches the perturbative-validity warning for the configured coupling.
CoherenceResult evaluate_physical(const DetectorConfig& detector, const PhysicalInputs& inputs,
                                  double rel_tol);

/// Appends a warning when coupling * C/g exceeds kPerturbativeWarningLevel.
void check_perturbative(const DetectorConfig& detector, CoherenceResult& result);

}  // namespace udw::qfield
