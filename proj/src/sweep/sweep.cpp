#include "udw/sweep/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "udw/qfield/coherence.hpp"

namespace udw::sweep {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

struct CellOutcome {
  double value;
  double error;
  bool flagged;
};

CellOutcome evaluate_cell(const CellEvaluator& evaluator, double e_bar, double t_bar) {
  try {
    const auto r = evaluator(e_bar, t_bar);
    return {r.c_over_g, r.err_estimate, false};
  } catch (const qfield::CoherenceError& err) {
    return {err.best().c_over_g, err.best().err_estimate, true};
  }
}

CellEvaluator standard_evaluator(const qfield::Trajectory& traj, double rel_tol) {
  return [traj, rel_tol](double e_bar, double t_bar) {
    return qfield::evaluate(traj, qfield::FieldProfile(e_bar), qfield::SwitchingProfile(t_bar),
                            rel_tol);
  };
}

}  // namespace

void GridSpec::validate() const {
  auto positive_finite = [](double x) { return x > 0.0 && std::isfinite(x); };
  require(positive_finite(e_bar_min), "e_bar_min must be finite and > 0");
  require(positive_finite(e_bar_max), "e_bar_max must be finite and > 0");
  require(positive_finite(t_bar_min), "t_bar_min must be finite and > 0");
  require(positive_finite(t_bar_max), "t_bar_max must be finite and > 0");
  require(e_bar_min < e_bar_max, "e_bar_min must be < e_bar_max");
  require(t_bar_min < t_bar_max, "t_bar_min must be < t_bar_max");
  require(n_e >= 2, "n_e must be >= 2");
  require(n_t >= 2, "n_t must be >= 2");
}

std::vector<double> make_axis(double lo, double hi, std::size_t n, Spacing spacing) {
  std::vector<double> axis(n);
  const double denom = static_cast<double>(n - 1);
  if (spacing == Spacing::Linear) {
    for (std::size_t k = 0; k < n; ++k) {
      axis[k] = lo + (hi - lo) * (static_cast<double>(k) / denom);
    }
  } else {
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t k = 0; k < n; ++k) {
      axis[k] = std::exp(llo + (lhi - llo) * (static_cast<double>(k) / denom));
    }
  }
  axis.front() = lo;
  axis.back() = hi;
  return axis;
}

std::vector<double> GridSpec::e_axis() const { return make_axis(e_bar_min, e_bar_max, n_e, spacing); }
std::vector<double> GridSpec::t_axis() const { return make_axis(t_bar_min, t_bar_max, n_t, spacing); }

void for_each_row(std::size_t rows, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(rows, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t base = rows / workers;
    const std::size_t extra = rows % workers;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t end = begin + base + (w < extra ? 1 : 0);
      pool.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
      begin = end;
    }
  }
  if (failure) std::rethrow_exception(failure);
}

SweepGrid sweep_grid(const qfield::Trajectory& traj, const GridSpec& spec, double rel_tol,
                     std::size_t workers) {
  return sweep_grid_with(standard_evaluator(traj, rel_tol), traj, spec, rel_tol, workers);
}

SweepGrid sweep_grid_with(const CellEvaluator& evaluator, const qfield::Trajectory& traj,
                          const GridSpec& spec, double rel_tol, std::size_t workers) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto e_axis = spec.e_axis();
  const auto t_axis = spec.t_axis();

  SweepGrid grid;
  grid.spec = spec;
  grid.trajectory = traj;
  grid.values = Array2D(spec.n_e, spec.n_t);
  grid.errors = Array2D(spec.n_e, spec.n_t);
  std::vector<unsigned char> flags(spec.n_e * spec.n_t, 0);

  // Build the shared kernel table before the workers start.
  (void)qfield::KernelTable::instance();

  for_each_row(spec.n_e, workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < spec.n_t; ++j) {
      const CellOutcome cell = evaluate_cell(evaluator, e_axis[i], t_axis[j]);
      grid.values(i, j) = cell.value;
      grid.errors(i, j) = cell.error;
      flags[i * spec.n_t + j] = cell.flagged ? 1 : 0;
    }
  });

  for (std::size_t i = 0; i < spec.n_e; ++i) {
    for (std::size_t j = 0; j < spec.n_t; ++j) {
      if (flags[i * spec.n_t + j]) grid.meta.flagged.emplace_back(i, j);
    }
  }
  grid.meta.rel_tol = rel_tol;
  grid.meta.workers = workers;
  grid.meta.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const double cells = static_cast<double>(spec.n_e * spec.n_t);
  if (static_cast<double>(grid.meta.flagged.size()) > kMaxFlaggedFraction * cells) {
    const std::string what = "sweep over " + qfield::trajectory_tag(traj) + ": " +
                             std::to_string(grid.meta.flagged.size()) + " of " +
                             std::to_string(spec.n_e * spec.n_t) +
                             " cells failed to converge (limit 1%)";
    throw SweepError(what, std::move(grid));
  }
  return grid;
}

DiffGrid diff_grid(const SweepGrid& a, const SweepGrid& b) {
  if (!(a.spec == b.spec)) throw std::invalid_argument("diff_grid: grid specs differ");
  DiffGrid d;
  d.spec = a.spec;
  d.minuend_tag = a.trajectory ? qfield::trajectory_tag(*a.trajectory) : "unknown";
  d.subtrahend_tag = b.trajectory ? qfield::trajectory_tag(*b.trajectory) : "unknown";
  d.values = Array2D(a.spec.n_e, a.spec.n_t);
  d.errors = Array2D(a.spec.n_e, a.spec.n_t);
  for (std::size_t i = 0; i < a.spec.n_e; ++i) {
    for (std::size_t j = 0; j < a.spec.n_t; ++j) {
      d.values(i, j) = a.values(i, j) - b.values(i, j);
      d.errors(i, j) = a.errors(i, j) + b.errors(i, j);
    }
  }
  std::vector<CellIndex> flagged = a.meta.flagged;
  flagged.insert(flagged.end(), b.meta.flagged.begin(), b.meta.flagged.end());
  std::sort(flagged.begin(), flagged.end());
  flagged.erase(std::unique(flagged.begin(), flagged.end()), flagged.end());
  d.flagged = std::move(flagged);
  return d;
}

DecoherenceCurve decoherence_curve(const std::vector<qfield::Trajectory>& trajectories,
                                   double e_bar, double t_bar_min, double t_bar_max,
                                   std::size_t n, double rel_tol, std::size_t workers) {
  if (n < 2) throw std::domain_error("decoherence_curve: n must be >= 2");
  if (trajectories.empty()) throw std::domain_error("decoherence_curve: no trajectories");
  require(t_bar_min > 0.0 && t_bar_min < t_bar_max && std::isfinite(t_bar_max),
          "decoherence_curve: need 0 < t_bar_min < t_bar_max");
  const qfield::FieldProfile field(e_bar);

  DecoherenceCurve curve;
  curve.e_bar = field.e_bar();
  curve.t_bar = make_axis(t_bar_min, t_bar_max, n, Spacing::Linear);
  for (const auto& traj : trajectories) curve.tags.push_back(qfield::trajectory_tag(traj));
  const std::size_t k = trajectories.size();
  std::vector<CellEvaluator> evaluators;
  for (const auto& traj : trajectories) evaluators.push_back(standard_evaluator(traj, rel_tol));
  curve.values = Array2D(n, k);
  curve.errors = Array2D(n, k);
  std::vector<unsigned char> flags(n * k, 0);

  (void)qfield::KernelTable::instance();
  for_each_row(n, workers, [&](std::size_t i) {
    for (std::size_t c = 0; c < k; ++c) {
      const CellOutcome cell = evaluate_cell(evaluators[c], e_bar, curve.t_bar[i]);
      curve.values(i, c) = cell.value;
      curve.errors(i, c) = cell.error;
      flags[i * k + c] = cell.flagged ? 1 : 0;
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      if (flags[i * k + c]) curve.flagged.emplace_back(i, c);
    }
  }
  return curve;
}

}  // namespace udw::sweep
