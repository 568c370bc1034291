#pragma once

#include <string>
#include <vector>

#include "udw/sweep/grid.hpp"

namespace udw::cli {

// gnuplot scripts that render a CSV written by serialize(). Each script
// reads `data_file` (relative to the working directory gnuplot runs in) and
// writes a PNG next to it.

/// Heatmap of a sweep (value column "c_over_g") or a diff ("dc_over_g").
/// Diff maps get a diverging palette centred on zero.
std::string heatmap_script(const std::string& data_file, const sweep::GridSpec& spec,
                           const std::string& title, bool diverging);

/// One line per trajectory column of a curve CSV.
std::string curve_script(const std::string& data_file, const std::vector<std::string>& tags,
                         double e_bar);

/// Swelling cells coloured by component id.
std::string regions_script(const std::string& data_file, const std::string& title);

}  // namespace udw::cli
