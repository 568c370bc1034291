#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "udw/cli/serialize.hpp"
#include "udw/sweep/grid.hpp"

namespace udw::cli {

enum class Command { Compute, Sweep, Diff, Regions, Curve };

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitComputation = 4,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physics or grid parameter outside its domain; the message names the flag.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a command needs. Unset optionals take the command's defaults.
struct RunConfig {
  Command command = Command::Compute;

  std::optional<double> e_bar;
  std::optional<double> t_bar;
  std::optional<double> velocity;
  std::optional<double> acceleration;
  std::vector<std::string> trajectories;  ///< curve: explicit trajectory tags

  std::optional<double> e_min, e_max, t_min, t_max;
  std::optional<std::size_t> n_e, n_t;
  bool log_spacing = false;

  std::optional<double> rel_tol;
  double threshold = 0.0;
  double coupling = 1.0;
  bool coupling_given = false;  ///< only then is the perturbative check applied
  std::size_t workers = 1;
  Format format = Format::Csv;
  std::optional<std::filesystem::path> out;
  bool emit_plot_script = false;
  std::vector<std::filesystem::path> inputs;

  /// Grid for sweep/diff/regions: [0.1, 5]^2 at 80 x 80 unless overridden.
  sweep::GridSpec grid_spec() const;
  /// Compute defaults to 1e-6, everything else to 1e-5.
  double effective_rel_tol() const;
};

/// Parses argv with CLI11. `--help` yields std::nullopt after printing help
/// to `out`. Throws UsageError on malformed or conflicting flags.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Executes a parsed config. Writes only the declared output files (the
/// --out path and, with --emit-plot-script, <out>.gp) and prints a one-line
/// summary. Returns an ExitCode; errors are reported on `err` as
/// "udw-coherence: error[<category>]: <message>".
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code mapping applied.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace udw::cli
