#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "udw/qfield/trajectory.hpp"

namespace udw::sweep {

enum class Spacing { Linear, Log };

/// Rectangular (E/Omega, Omega T) parameter grid. Rows index energy, columns
/// index duration.
struct GridSpec {
  double e_bar_min = 0.1;
  double e_bar_max = 5.0;
  double t_bar_min = 0.1;
  double t_bar_max = 5.0;
  std::size_t n_e = 80;
  std::size_t n_t = 80;
  Spacing spacing = Spacing::Linear;

  /// Throws std::domain_error naming the offending field.
  void validate() const;

  std::vector<double> e_axis() const;
  std::vector<double> t_axis() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// n points from lo to hi inclusive; both endpoints are reproduced exactly.
std::vector<double> make_axis(double lo, double hi, std::size_t n, Spacing spacing);

/// Dense row-major 2D array.
class Array2D {
 public:
  Array2D() = default;
  Array2D(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  friend bool operator==(const Array2D&, const Array2D&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

using CellIndex = std::pair<std::size_t, std::size_t>;

struct SweepMeta {
  double rel_tol = 0.0;
  std::size_t workers = 1;
  double elapsed_seconds = 0.0;
  std::vector<CellIndex> flagged;  ///< cells whose quadrature did not converge
};

/// C/g on a GridSpec. `trajectory` is empty only for grids read back from a
/// format that does not carry it.
struct SweepGrid {
  GridSpec spec;
  std::optional<qfield::Trajectory> trajectory;
  Array2D values;
  Array2D errors;
  SweepMeta meta;
};

/// Pointwise minuend - subtrahend with summed error bounds.
struct DiffGrid {
  GridSpec spec;
  std::string minuend_tag;
  std::string subtrahend_tag;
  Array2D values;
  Array2D errors;
  std::vector<CellIndex> flagged;
};

struct SwellingCell {
  std::size_t i = 0;
  std::size_t j = 0;
  double e_bar = 0.0;
  double t_bar = 0.0;
  double diff = 0.0;
  std::size_t component = 0;
};

struct SwellingComponent {
  std::size_t id = 0;
  std::size_t size = 0;
  std::size_t i_min = 0, i_max = 0, j_min = 0, j_max = 0;
  double e_bar_min = 0.0, e_bar_max = 0.0, t_bar_min = 0.0, t_bar_max = 0.0;
  std::size_t peak_i = 0, peak_j = 0;
  double peak_diff = 0.0;
};

struct SwellingReport {
  double threshold = 0.0;
  std::vector<SwellingCell> cells;           ///< row-major order
  std::vector<SwellingComponent> components;  ///< in discovery order
};

/// Fixed-energy C/g against duration, one column per trajectory.
struct DecoherenceCurve {
  double e_bar = 0.0;
  std::vector<std::string> tags;
  std::vector<double> t_bar;
  Array2D values;  ///< (n samples) x (trajectories)
  Array2D errors;
  std::vector<CellIndex> flagged;
};

}  // namespace udw::sweep
