#include "udw/qfield/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace udw::qfield {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double parse_number(std::string_view text, std::string_view tag) {
  const std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument("malformed trajectory tag '" + std::string(tag) + "'");
  }
  return value;
}

}  // namespace

ConstantVelocity::ConstantVelocity(double upsilon) : upsilon_(upsilon) {
  if (!(std::abs(upsilon) < 1.0)) {
    throw std::domain_error("velocity must satisfy |v| < 1, got " + std::to_string(upsilon));
  }
}

double ConstantVelocity::lorentz_gamma() const noexcept {
  return 1.0 / std::sqrt((1.0 - upsilon_) * (1.0 + upsilon_));
}

UniformAcceleration::UniformAcceleration(double a_bar) : a_bar_(a_bar) {
  if (!(a_bar > 0.0) || !std::isfinite(a_bar)) {
    throw std::domain_error("acceleration must be finite and > 0 (use Rest for zero), got " +
                            std::to_string(a_bar));
  }
}

LightconeCoords lightcone_coords(const Trajectory& traj, double tau_bar) {
  return std::visit(
      Overloaded{
          [&](const Rest&) { return LightconeCoords{tau_bar, tau_bar}; },
          [&](const ConstantVelocity& m) {
            const double g = m.lorentz_gamma();
            return LightconeCoords{g * (1.0 - m.upsilon()) * tau_bar,
                                   g * (1.0 + m.upsilon()) * tau_bar};
          },
          [&](const UniformAcceleration& m) {
            const double a = m.a_bar();
            return LightconeCoords{-std::expm1(-a * tau_bar) / a, std::expm1(a * tau_bar) / a};
          },
      },
      traj);
}

std::string trajectory_tag(const Trajectory& traj) {
  return std::visit(
      Overloaded{
          [](const Rest&) { return std::string("rest"); },
          [](const ConstantVelocity& m) { return "velocity:" + format_g12(m.upsilon()); },
          [](const UniformAcceleration& m) { return "acceleration:" + format_g12(m.a_bar()); },
      },
      traj);
}

Trajectory parse_trajectory_tag(std::string_view tag) {
  if (tag == "rest") return Rest{};
  constexpr std::string_view kVelocity = "velocity:";
  constexpr std::string_view kAcceleration = "acceleration:";
  if (tag.starts_with(kVelocity)) {
    return ConstantVelocity(parse_number(tag.substr(kVelocity.size()), tag));
  }
  if (tag.starts_with(kAcceleration)) {
    return UniformAcceleration(parse_number(tag.substr(kAcceleration.size()), tag));
  }
  throw std::invalid_argument("unknown trajectory tag '" + std::string(tag) + "'");
}

}  // namespace udw::qfield
