#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "udw/qfield/types.hpp"
#include "udw/sweep/grid.hpp"

namespace udw::sweep {

/// Fraction of flagged cells above which a sweep fails as a whole.
inline constexpr double kMaxFlaggedFraction = 0.01;

/// Raised when more than kMaxFlaggedFraction of a sweep's cells failed to
/// converge. The partially flagged grid is attached.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, SweepGrid grid)
      : std::runtime_error(what), grid_(std::move(grid)) {}
  const SweepGrid& grid() const noexcept { return grid_; }

 private:
  SweepGrid grid_;
};

/// Runs fn(row) for row in [0, rows) on `workers` threads, each owning one
/// contiguous block of rows. Exceptions are rethrown on the caller's thread.
void for_each_row(std::size_t rows, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

/// Evaluates one cell. Throwing qfield::CoherenceError flags the cell and
/// keeps the attached best estimate.
using CellEvaluator = std::function<qfield::CoherenceResult(double e_bar, double t_bar)>;

/// Grid of evaluator results; `traj` is recorded as the grid's trajectory.
SweepGrid sweep_grid_with(const CellEvaluator& evaluator, const qfield::Trajectory& traj,
                          const GridSpec& spec, double rel_tol, std::size_t workers = 1);

/// One coherence evaluation per cell with the cheapest valid method
/// (qfield::evaluate). Cells whose quadrature fails keep the best estimate
/// and are flagged. Output is independent of `workers`.
SweepGrid sweep_grid(const qfield::Trajectory& traj, const GridSpec& spec, double rel_tol,
                     std::size_t workers = 1);

/// a - b. Throws std::invalid_argument when the specs differ.
DiffGrid diff_grid(const SweepGrid& a, const SweepGrid& b);

/// Cells with diff > threshold + error, grouped into 4-connected components.
SwellingReport swelling_regions(const DiffGrid& d, double threshold);

/// True if some component contains a cell whose (e_bar, t_bar) satisfies pred.
bool has_component_where(const SwellingReport& report,
                         const std::function<bool(double e_bar, double t_bar)>& pred);

/// C/g at n durations evenly spaced on [t_bar_min, t_bar_max] for each
/// trajectory, at fixed e_bar.
DecoherenceCurve decoherence_curve(const std::vector<qfield::Trajectory>& trajectories,
                                   double e_bar, double t_bar_min, double t_bar_max,
                                   std::size_t n, double rel_tol, std::size_t workers = 1);

}  // namespace udw::sweep
