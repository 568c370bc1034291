#include <algorithm>
#include <deque>

#include "udw/sweep/sweep.hpp"

namespace udw::sweep {

SwellingReport swelling_regions(const DiffGrid& d, double threshold) {
  if (!(threshold >= 0.0)) throw std::domain_error("swelling_regions: threshold must be >= 0");
  const std::size_t rows = d.values.rows();
  const std::size_t cols = d.values.cols();
  const auto e_axis = d.spec.e_axis();
  const auto t_axis = d.spec.t_axis();

  auto qualifies = [&](std::size_t i, std::size_t j) {
    return d.values(i, j) > threshold + d.errors(i, j);
  };

  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(rows * cols, kUnassigned);
  SwellingReport report;
  report.threshold = threshold;

  for (std::size_t i0 = 0; i0 < rows; ++i0) {
    for (std::size_t j0 = 0; j0 < cols; ++j0) {
      if (!qualifies(i0, j0) || label[i0 * cols + j0] != kUnassigned) continue;
      SwellingComponent comp;
      comp.id = report.components.size();
      comp.i_min = comp.i_max = i0;
      comp.j_min = comp.j_max = j0;
      comp.peak_i = i0;
      comp.peak_j = j0;
      comp.peak_diff = d.values(i0, j0);
      std::deque<CellIndex> frontier{{i0, j0}};
      label[i0 * cols + j0] = comp.id;
      while (!frontier.empty()) {
        const auto [i, j] = frontier.front();
        frontier.pop_front();
        ++comp.size;
        comp.i_min = std::min(comp.i_min, i);
        comp.i_max = std::max(comp.i_max, i);
        comp.j_min = std::min(comp.j_min, j);
        comp.j_max = std::max(comp.j_max, j);
        if (d.values(i, j) > comp.peak_diff) {
          comp.peak_diff = d.values(i, j);
          comp.peak_i = i;
          comp.peak_j = j;
        }
        auto visit = [&](std::size_t ni, std::size_t nj) {
          if (qualifies(ni, nj) && label[ni * cols + nj] == kUnassigned) {
            label[ni * cols + nj] = comp.id;
            frontier.emplace_back(ni, nj);
          }
        };
        if (i > 0) visit(i - 1, j);
        if (i + 1 < rows) visit(i + 1, j);
        if (j > 0) visit(i, j - 1);
        if (j + 1 < cols) visit(i, j + 1);
      }
      comp.e_bar_min = e_axis[comp.i_min];
      comp.e_bar_max = e_axis[comp.i_max];
      comp.t_bar_min = t_axis[comp.j_min];
      comp.t_bar_max = t_axis[comp.j_max];
      report.components.push_back(comp);
    }
  }

  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t id = label[i * cols + j];
      if (id == kUnassigned) continue;
      report.cells.push_back({i, j, e_axis[i], t_axis[j], d.values(i, j), id});
    }
  }
  return report;
}

bool has_component_where(const SwellingReport& report,
                         const std::function<bool(double e_bar, double t_bar)>& pred) {
  return std::any_of(report.cells.begin(), report.cells.end(),
                     [&](const SwellingCell& c) { return pred(c.e_bar, c.t_bar); });
}

}  // namespace udw::sweep
