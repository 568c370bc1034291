#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace udw::specfun {

/// Outcome of a numerical integration. `err_estimate` is an absolute bound on
/// the achieved error; `evaluations` counts integrand calls.
template <typename Value>
struct BasicQuadratureResult {
  Value value{};
  double err_estimate = 0.0;
  std::size_t evaluations = 0;
};

using QuadratureResult = BasicQuadratureResult<double>;
using ComplexQuadratureResult = BasicQuadratureResult<std::complex<double>>;

/// Raised when the evaluation budget is exhausted before the tolerance is
/// met. Carries the best estimate reached so far.
template <typename Value>
class BasicQuadratureError : public std::runtime_error {
 public:
  BasicQuadratureError(const std::string& what, BasicQuadratureResult<Value> best)
      : std::runtime_error(what), best_(best) {}

  const BasicQuadratureResult<Value>& best() const noexcept { return best_; }

 private:
  BasicQuadratureResult<Value> best_;
};

using QuadratureError = BasicQuadratureError<double>;
using ComplexQuadratureError = BasicQuadratureError<std::complex<double>>;

inline constexpr std::size_t kDefaultEvaluationBudget = 1'000'000;

using RealFunction = std::function<double(double)>;
using ComplexFunction = std::function<std::complex<double>(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on the finite interval
/// [a, b]. The interval with the largest error estimate is bisected until
///   sum(err) <= max(abs_tol, rel_tol * |value|)
/// or until the remaining error is at the rounding floor of the rule. The
/// per-interval error estimate is |K15 - G7|, which bounds the Kronrod
/// result for smooth integrands.
///
/// Throws QuadratureError if `max_evaluations` is exhausted first, and
/// std::invalid_argument unless a < b are finite and tolerances are >= 0.
QuadratureResult integrate_adaptive(const RealFunction& f, double a, double b, double rel_tol,
                                    double abs_tol,
                                    std::size_t max_evaluations = kDefaultEvaluationBudget);

/// Complex-valued variant; the tolerance applies to the modulus of the
/// integral, so a vanishing real or imaginary part does not stall it.
ComplexQuadratureResult integrate_adaptive(const ComplexFunction& f, double a, double b,
                                           double rel_tol, double abs_tol,
                                           std::size_t max_evaluations = kDefaultEvaluationBudget);

/// Accepts any callable and forwards to the real or complex overload
/// according to its return type.
template <typename F>
  requires(!std::is_same_v<std::decay_t<F>, RealFunction> &&
           !std::is_same_v<std::decay_t<F>, ComplexFunction> &&
           std::is_invocable_v<const F&, double>)
auto integrate_adaptive(const F& f, double a, double b, double rel_tol, double abs_tol,
                        std::size_t max_evaluations = kDefaultEvaluationBudget) {
  using R = std::invoke_result_t<const F&, double>;
  if constexpr (std::is_convertible_v<R, double>) {
    return integrate_adaptive(RealFunction(f), a, b, rel_tol, abs_tol, max_evaluations);
  } else {
    return integrate_adaptive(ComplexFunction(f), a, b, rel_tol, abs_tol, max_evaluations);
  }
}

/// Integral of g(k) k^(-1/2) over [0, inf) for smooth, rapidly decaying g.
///
/// The substitution k = w^2 turns the integrand into 2 g(w^2), which is
/// regular at the origin. The range is truncated at w = sqrt(k_cutoff). When
/// `k_cutoff` is 0 it is located automatically by probing g on k = 2^j,
/// j = -8..64, and placing the cutoff one octave beyond the last probe where
/// |g| exceeds 1e-17 of the largest probed value. An identically vanishing
/// probe set returns 0.
QuadratureResult integrate_halfline_sqrt_singularity(
    const RealFunction& g, double rel_tol, double abs_tol = 0.0, double k_cutoff = 0.0,
    std::size_t max_evaluations = kDefaultEvaluationBudget);

}  // namespace udw::specfun
