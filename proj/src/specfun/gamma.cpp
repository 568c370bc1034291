#include "udw/specfun/gamma.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace udw::specfun {

namespace {

constexpr double kLanczosG = 5.24218750000000000;  // 671/128
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr std::array<double, 14> kLanczosCoeffs = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
constexpr double kSqrtTwoPi = 2.5066282746310005;

void check_domain(double x, const char* who) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(who) + ": argument must be finite and > 0, got " +
                            std::to_string(x));
  }
}

// Valid for x >= 1/2.
double lanczos_log_gamma(double x) {
  double tmp = x + kLanczosG;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double series = kLanczosC0;
  double y = x;
  for (double c : kLanczosCoeffs) series += c / ++y;
  return tmp + std::log(kSqrtTwoPi * series / x);
}

}  // namespace

double log_gamma_real(double x) {
  check_domain(x, "log_gamma_real");
  if (x < 0.5) return lanczos_log_gamma(x + 1.0) - std::log(x);
  return lanczos_log_gamma(x);
}

double gamma_real(double x) {
  check_domain(x, "gamma_real");
  if (x < 0.5) return std::exp(lanczos_log_gamma(x + 1.0)) / x;
  return std::exp(lanczos_log_gamma(x));
}

}  // namespace udw::specfun
