#include "udw/specfun/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace udw::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod 15-point abscissae (positive half, descending); odd indices are the
// embedded 7-point Gauss abscissae.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Value>
struct Segment {
  double a = 0.0;
  double b = 0.0;
  Value value{};
  double err = 0.0;
  double abs_value = 0.0;  // integral of |f|, for the rounding floor
};

template <typename Value, typename F>
Segment<Value> kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Value fc = f(center);
  Value kronrod = fc * kWk[7];
  Value gauss = fc * kWg[3];
  double abs_sum = std::abs(fc) * kWk[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXk[j];
    const Value f1 = f(center - dx);
    const Value f2 = f(center + dx);
    const Value pair = f1 + f2;
    kronrod += pair * kWk[j];
    abs_sum += (std::abs(f1) + std::abs(f2)) * kWk[j];
    if (j % 2 == 1) gauss += pair * kWg[j / 2];
  }
  Segment<Value> seg;
  seg.a = a;
  seg.b = b;
  seg.value = kronrod * half;
  seg.abs_value = abs_sum * std::abs(half);
  const double diff = std::abs((kronrod - gauss) * half);
  seg.err = std::max(diff, 50.0 * kEps * seg.abs_value);
  return seg;
}

template <typename Value, typename F>
BasicQuadratureResult<Value> adaptive(const F& f, double a, double b, double rel_tol,
                                      double abs_tol, std::size_t max_evaluations) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw std::invalid_argument("integrate_adaptive: need finite a < b");
  }
  if (!(rel_tol >= 0.0) || !(abs_tol >= 0.0)) {
    throw std::invalid_argument("integrate_adaptive: tolerances must be >= 0");
  }

  auto checked = [&f](double x) {
    const Value v = f(x);
    if (!std::isfinite(std::abs(v))) {
      throw std::domain_error("integrate_adaptive: integrand not finite at x = " +
                              std::to_string(x));
    }
    return v;
  };

  constexpr std::size_t kRule = 15;
  auto worse = [](const Segment<Value>& l, const Segment<Value>& r) { return l.err < r.err; };
  std::priority_queue<Segment<Value>, std::vector<Segment<Value>>, decltype(worse)> heap(worse);

  heap.push(kronrod15<Value>(checked, a, b));
  std::size_t evaluations = kRule;
  Value total = heap.top().value;
  double total_err = heap.top().err;
  double total_abs = heap.top().abs_value;
  // Segments too narrow to split further; they stay in the total.
  std::vector<Segment<Value>> frozen;

  auto converged = [&] {
    const double target = std::max(abs_tol, rel_tol * std::abs(total));
    return total_err <= target || total_err <= 100.0 * kEps * total_abs;
  };

  auto fail = [&](const std::string& why) {
    BasicQuadratureResult<Value> best{total, total_err, evaluations};
    throw BasicQuadratureError<Value>("integrate_adaptive: " + why + " on [" +
                                          std::to_string(a) + ", " + std::to_string(b) +
                                          "] with error estimate " + std::to_string(total_err),
                                      best);
  };

  while (!converged()) {
    if (heap.empty()) fail("no subdividable interval left");
    if (evaluations + 2 * kRule > max_evaluations) {
      fail("evaluation budget of " + std::to_string(max_evaluations) + " exhausted");
    }
    Segment<Value> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b) ||
        (worst.b - worst.a) < 4.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    Segment<Value> left = kronrod15<Value>(checked, worst.a, mid);
    Segment<Value> right = kronrod15<Value>(checked, mid, worst.b);
    evaluations += 2 * kRule;
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  Value sum{};
  double err = 0.0;
  for (const auto& seg : frozen) {
    sum += seg.value;
    err += seg.err;
  }
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().err;
    heap.pop();
  }
  return {sum, err, evaluations};
}

}  // namespace

QuadratureResult integrate_adaptive(const RealFunction& f, double a, double b, double rel_tol,
                                    double abs_tol, std::size_t max_evaluations) {
  return adaptive<double>(f, a, b, rel_tol, abs_tol, max_evaluations);
}

ComplexQuadratureResult integrate_adaptive(const ComplexFunction& f, double a, double b,
                                           double rel_tol, double abs_tol,
                                           std::size_t max_evaluations) {
  return adaptive<std::complex<double>>(f, a, b, rel_tol, abs_tol, max_evaluations);
}

QuadratureResult integrate_halfline_sqrt_singularity(const RealFunction& g, double rel_tol,
                                                     double abs_tol, double k_cutoff,
                                                     std::size_t max_evaluations) {
  std::size_t probes = 0;
  if (k_cutoff == 0.0) {
    constexpr int kLow = -8;
    constexpr int kHigh = 64;
    std::array<double, kHigh - kLow + 1> mags{};
    double peak = 0.0;
    for (int j = kLow; j <= kHigh; ++j) {
      const double m = std::abs(g(std::ldexp(1.0, j)));
      mags[j - kLow] = m;
      peak = std::max(peak, m);
    }
    probes = mags.size();
    if (peak == 0.0) return {0.0, 0.0, probes};
    int last = kLow;
    for (int j = kLow; j <= kHigh; ++j) {
      if (mags[j - kLow] > 1e-17 * peak) last = j;
    }
    k_cutoff = std::ldexp(1.0, last + 1);
  }
  if (!(k_cutoff > 0.0) || !std::isfinite(k_cutoff)) {
    throw std::invalid_argument("integrate_halfline_sqrt_singularity: bad cutoff");
  }
  const double w_max = std::sqrt(k_cutoff);
  auto mapped = [&g](double w) { return 2.0 * g(w * w); };
  QuadratureResult r = integrate_adaptive(RealFunction(mapped), 0.0, w_max, rel_tol, abs_tol,
                                          max_evaluations);
  r.evaluations += probes;
  return r;
}

}  // namespace udw::specfun
