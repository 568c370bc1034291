#pragma once

namespace udw::specfun {

/// Argument at which bessel_i_scaled switches from the power series to the
/// large-argument expansion (for orders with nu^2 < z).
inline constexpr double kBesselSeriesSwitchover = 30.0;

/// Exponentially scaled modified Bessel function of the first kind,
/// e^(-z) * I_nu(z), for real order nu > -1 and z > 0.
///
/// Below the switchover the ascending series is summed with every term
/// pre-multiplied by e^(-z), so no intermediate overflows; all terms are
/// positive for nu > -1. Above it the Hankel expansion is truncated at its
/// smallest term, which for z >= 30 is below e^(-2z). Accuracy is ~1e-14
/// relative for moderate orders (|nu| <= 5); z = +inf returns 0.
///
/// Throws std::domain_error for z <= 0, nu <= -1, or NaN inputs.
double bessel_i_scaled(double nu, double z);

}  // namespace udw::specfun
