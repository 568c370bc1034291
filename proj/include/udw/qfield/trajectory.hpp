#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace udw::qfield {

/// t(tau) = tau, x(tau) = 0.
struct Rest {
  friend bool operator==(const Rest&, const Rest&) = default;
};

/// Inertial worldline t = gamma tau, x = gamma v tau, with |v| < 1.
class ConstantVelocity {
 public:
  explicit ConstantVelocity(double upsilon);
  double upsilon() const noexcept { return upsilon_; }
  double lorentz_gamma() const noexcept;

  friend bool operator==(const ConstantVelocity&, const ConstantVelocity&) = default;

 private:
  double upsilon_;
};

/// Hyperbolic worldline t = sinh(a tau)/a, x = (cosh(a tau) - 1)/a with
/// reduced proper acceleration a/Omega > 0. Zero acceleration is rejected;
/// request Rest instead.
class UniformAcceleration {
 public:
  explicit UniformAcceleration(double a_bar);
  double a_bar() const noexcept { return a_bar_; }

  friend bool operator==(const UniformAcceleration&, const UniformAcceleration&) = default;

 private:
  double a_bar_;
};

using Trajectory = std::variant<Rest, ConstantVelocity, UniformAcceleration>;

/// Light-cone coordinates u = t - x and v = t + x (reduced time units).
struct LightconeCoords {
  double u = 0.0;
  double v = 0.0;
};

LightconeCoords lightcone_coords(const Trajectory& traj, double tau_bar);

/// "rest", "velocity:<v>" or "acceleration:<a>", numbers in %.12g.
std::string trajectory_tag(const Trajectory& traj);

/// Inverse of trajectory_tag. Throws std::invalid_argument on malformed tags
/// and std::domain_error on out-of-range parameters.
Trajectory parse_trajectory_tag(std::string_view tag);

}  // namespace udw::qfield
