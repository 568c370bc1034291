#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "udw/qfield/coherence.hpp"
#include "udw/sweep/grid.hpp"

namespace udw::cli {

enum class Format { Csv, Json };

std::string_view to_string(Format f);

/// Malformed input given to one of the readers.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system failure; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 12 significant digits, shortest form, locale independent. Zero is
/// written as 0.000000000000.
std::string format_number(double x);

// CSV layouts (header first, LF endings, rows in row-major axis order):
//   sweep   e_over_omega,omega_t,c_over_g,err
//   diff    e_over_omega,omega_t,dc_over_g,err
//   regions i,j,e_over_omega,omega_t,dc_over_g,component
//   curve   omega_t,<trajectory tag>...
//   compute e_over_omega,omega_t,c_over_g,err
// JSON carries the full structure: {kind, spec, trajectory, axes, values,
// errors, meta} for grids, with nested row-major arrays.

std::string serialize(const sweep::SweepGrid& grid, Format format);
std::string serialize(const sweep::DiffGrid& grid, Format format);
std::string serialize(const sweep::SwellingReport& report, Format format);
std::string serialize(const sweep::DecoherenceCurve& curve, Format format);

/// Single evaluation at (e_bar, t_bar).
std::string serialize_point(const std::string& trajectory_tag, double e_bar, double t_bar,
                            const qfield::CoherenceResult& result, Format format);

/// Readers. CSV input reconstructs numeric content; fields the CSV layout
/// does not carry (trajectory, tolerances, flags, threshold, e_bar of a
/// curve) are left at their defaults.
sweep::SweepGrid parse_sweep_grid(std::string_view text, Format format);
sweep::DiffGrid parse_diff_grid(std::string_view text, Format format);
sweep::SwellingReport parse_swelling_report(std::string_view text, Format format);
sweep::DecoherenceCurve parse_decoherence_curve(std::string_view text, Format format);

/// JSON if the first non-blank character is '{', CSV otherwise.
Format detect_format(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace udw::cli
