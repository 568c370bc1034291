#include "udw/cli/run.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "udw/cli/plot_script.hpp"
#include "udw/qfield/coherence.hpp"
#include "udw/sweep/sweep.hpp"

namespace udw::cli {

namespace {

constexpr const char* kProgram = "udw-coherence";

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

qfield::Trajectory motion_from(const RunConfig& c) {
  if (c.velocity) {
    require(std::abs(*c.velocity) < 1.0, "--velocity must satisfy |v| < 1");
    return qfield::ConstantVelocity(*c.velocity);
  }
  if (c.acceleration) {
    require(positive_finite(*c.acceleration),
            "--acceleration must be finite and > 0 (omit it for a detector at rest)");
    return qfield::UniformAcceleration(*c.acceleration);
  }
  return qfield::Rest{};
}

sweep::GridSpec validated_grid(const RunConfig& c) {
  const sweep::GridSpec spec = c.grid_spec();
  require(positive_finite(spec.e_bar_min), "--e-min must be finite and > 0");
  require(positive_finite(spec.e_bar_max), "--e-max must be finite and > 0");
  require(positive_finite(spec.t_bar_min), "--t-min must be finite and > 0");
  require(positive_finite(spec.t_bar_max), "--t-max must be finite and > 0");
  require(spec.e_bar_min < spec.e_bar_max, "--e-min must be smaller than --e-max");
  require(spec.t_bar_min < spec.t_bar_max, "--t-min must be smaller than --t-max");
  require(spec.n_e >= 2, "--n-e must be >= 2");
  require(spec.n_t >= 2, "--n-t must be >= 2");
  return spec;
}

void validate_common(const RunConfig& c) {
  const double tol = c.effective_rel_tol();
  require(tol >= 1e-10 && tol <= 1e-2, "--rel-tol must lie in [1e-10, 1e-2]");
  require(c.workers >= 1, "--workers must be >= 1");
  require(c.threshold >= 0.0 && std::isfinite(c.threshold), "--threshold must be >= 0");
  require(positive_finite(c.coupling), "--coupling must be finite and > 0");
  if (c.emit_plot_script) {
    if (!c.out) throw UsageError("--emit-plot-script requires --out");
    if (c.format != Format::Csv) throw UsageError("--emit-plot-script requires --format csv");
    if (c.command == Command::Compute) {
      throw UsageError("--emit-plot-script is not available for compute");
    }
  }
}

// Emits the data (to --out or stdout) and returns the stream that should
// receive the human-readable summary.
std::ostream& emit(const RunConfig& c, const std::string& bytes, std::ostream& out,
                   std::ostream& err) {
  if (c.out) {
    write_file(*c.out, bytes);
    return out;
  }
  out << bytes;
  return err;
}

void emit_script(const RunConfig& c, const std::string& script) {
  if (!c.emit_plot_script) return;
  std::filesystem::path path = *c.out;
  path += ".gp";
  write_file(path, script);
}

std::string destination(const RunConfig& c) { return c.out ? c.out->string() : "stdout"; }

std::string data_name(const RunConfig& c) { return c.out ? c.out->filename().string() : ""; }

sweep::DiffGrid load_or_compute_diff(const RunConfig& c) {
  if (!c.inputs.empty()) {
    if (c.inputs.size() != 2) {
      throw UsageError("diff takes either two sweep files (minuend subtrahend) or none");
    }
    auto load = [](const std::filesystem::path& p) {
      const std::string text = read_file(p);
      try {
        return parse_sweep_grid(text, detect_format(text));
      } catch (const ParseError& e) {
        throw ValidationError("'" + p.string() + "': " + e.what());
      }
    };
    const auto a = load(c.inputs[0]);
    const auto b = load(c.inputs[1]);
    if (!(a.spec == b.spec)) throw ValidationError("input sweeps were computed on different grids");
    return sweep::diff_grid(a, b);
  }
  const auto spec = validated_grid(c);
  const auto motion = motion_from(c);
  const double tol = c.effective_rel_tol();
  const auto moving = sweep::sweep_grid(motion, spec, tol, c.workers);
  const auto rest = sweep::sweep_grid(qfield::Rest{}, spec, tol, c.workers);
  return sweep::diff_grid(moving, rest);
}

int run_compute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.e_bar) throw UsageError("compute requires --e-bar");
  if (!c.t_bar) throw UsageError("compute requires --t-bar");
  require(positive_finite(*c.e_bar), "--e-bar must be finite and > 0");
  require(positive_finite(*c.t_bar), "--t-bar must be finite and > 0");
  const auto traj = motion_from(c);
  auto result = qfield::evaluate(traj, qfield::FieldProfile(*c.e_bar),
                                 qfield::SwitchingProfile(*c.t_bar), c.effective_rel_tol());
  if (c.coupling_given) qfield::check_perturbative(qfield::DetectorConfig{1.0, c.coupling}, result);
  for (const auto& w : result.warnings) err << kProgram << ": warning: " << w << '\n';
  const std::string tag = qfield::trajectory_tag(traj);
  if (c.out) write_file(*c.out, serialize_point(tag, *c.e_bar, *c.t_bar, result, c.format));
  out << fmt::format("C/g = {} +/- {:.3g} ({}, {}, e_bar={}, t_bar={})\n",
                     format_number(result.c_over_g), result.err_estimate,
                     qfield::to_string(result.method), tag, *c.e_bar, *c.t_bar);
  return kExitSuccess;
}

int run_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto spec = validated_grid(c);
  const auto traj = motion_from(c);
  const auto grid = sweep::sweep_grid(traj, spec, c.effective_rel_tol(), c.workers);
  std::ostream& summary = emit(c, serialize(grid, c.format), out, err);
  emit_script(c, heatmap_script(data_name(c), spec,
                                "C/g, " + qfield::trajectory_tag(traj), false));
  summary << fmt::format("sweep {}: {} cells, {} flagged, {:.2f} s -> {}\n",
                         qfield::trajectory_tag(traj), spec.n_e * spec.n_t,
                         grid.meta.flagged.size(), grid.meta.elapsed_seconds, destination(c));
  return kExitSuccess;
}

int run_diff(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto d = load_or_compute_diff(c);
  std::size_t positive = 0;
  for (double v : d.values.data()) positive += v > 0.0 ? 1 : 0;
  std::ostream& summary = emit(c, serialize(d, c.format), out, err);
  emit_script(c, heatmap_script(data_name(c), d.spec,
                                "(" + d.minuend_tag + ") - (" + d.subtrahend_tag + ")", true));
  summary << fmt::format("diff {} - {}: {} cells, {} positive -> {}\n", d.minuend_tag,
                         d.subtrahend_tag, d.values.data().size(), positive, destination(c));
  return kExitSuccess;
}

int run_regions(const RunConfig& c, std::ostream& out, std::ostream& err) {
  sweep::DiffGrid d;
  if (c.inputs.size() == 1) {
    const std::string text = read_file(c.inputs.front());
    try {
      d = parse_diff_grid(text, detect_format(text));
    } catch (const ParseError& e) {
      throw ValidationError("'" + c.inputs.front().string() + "': " + e.what());
    }
  } else if (c.inputs.empty()) {
    d = load_or_compute_diff(c);
  } else {
    throw UsageError("regions takes at most one diff file");
  }
  const auto report = sweep::swelling_regions(d, c.threshold);
  std::ostream& summary = emit(c, serialize(report, c.format), out, err);
  emit_script(c, regions_script(data_name(c), "swelling regions, " + d.minuend_tag));
  summary << fmt::format("regions: {} cells in {} components (threshold {}) -> {}\n",
                         report.cells.size(), report.components.size(), c.threshold,
                         destination(c));
  return kExitSuccess;
}

int run_curve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.e_bar) throw UsageError("curve requires --e-bar");
  require(positive_finite(*c.e_bar), "--e-bar must be finite and > 0");
  const double t_lo = c.t_min.value_or(0.05);
  const double t_hi = c.t_max.value_or(5.0);
  const std::size_t n = c.n_t.value_or(100);
  require(positive_finite(t_lo), "--t-min must be finite and > 0");
  require(positive_finite(t_hi) && t_lo < t_hi, "--t-max must be finite and > --t-min");
  require(n >= 2, "--n-t must be >= 2");

  std::vector<qfield::Trajectory> trajs;
  if (!c.trajectories.empty()) {
    for (const auto& tag : c.trajectories) {
      try {
        trajs.push_back(qfield::parse_trajectory_tag(tag));
      } catch (const std::exception& e) {
        throw ValidationError(std::string("--trajectory: ") + e.what());
      }
    }
  } else if (c.velocity || c.acceleration) {
    trajs = {qfield::Rest{}, motion_from(c)};
  } else {
    trajs = {qfield::Rest{}, qfield::ConstantVelocity(0.8), qfield::UniformAcceleration(2.0)};
  }
  const auto curve =
      sweep::decoherence_curve(trajs, *c.e_bar, t_lo, t_hi, n, c.effective_rel_tol(), c.workers);
  std::ostream& summary = emit(c, serialize(curve, c.format), out, err);
  emit_script(c, curve_script(data_name(c), curve.tags, curve.e_bar));
  summary << fmt::format("curve e_bar={}: {} samples x {} trajectories, {} flagged -> {}\n",
                         *c.e_bar, n, trajs.size(), curve.flagged.size(), destination(c));
  return kExitSuccess;
}

void report_flagged(const sweep::SweepGrid& grid, std::ostream& err) {
  const auto e_axis = grid.spec.e_axis();
  const auto t_axis = grid.spec.t_axis();
  for (const auto& [i, j] : grid.meta.flagged) {
    err << fmt::format("  flagged cell ({}, {}): e_bar={} t_bar={} best={} err={}\n", i, j,
                       format_number(e_axis[i]), format_number(t_axis[j]),
                       format_number(grid.values(i, j)), format_number(grid.errors(i, j)));
  }
}

void add_trajectory_flags(CLI::App& app, RunConfig& c) {
  auto* v = app.add_option("--velocity", c.velocity, "detector speed v (units of c), |v| < 1");
  auto* a = app.add_option("--acceleration", c.acceleration, "reduced proper acceleration a/Omega > 0");
  v->excludes(a);
  a->excludes(v);
}

void add_grid_flags(CLI::App& app, RunConfig& c) {
  app.add_option("--e-min", c.e_min, "smallest E/Omega (default 0.1)");
  app.add_option("--e-max", c.e_max, "largest E/Omega (default 5)");
  app.add_option("--t-min", c.t_min, "smallest Omega*T (default 0.1)");
  app.add_option("--t-max", c.t_max, "largest Omega*T (default 5)");
  app.add_option("--n-e", c.n_e, "points along E/Omega (default 80)");
  app.add_option("--n-t", c.n_t, "points along Omega*T (default 80)");
  app.add_flag("--log", c.log_spacing, "logarithmic axis spacing");
}

void add_output_flags(CLI::App& app, RunConfig& c, std::string& format_name, bool plot) {
  app.add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance");
  app.add_option("--format", format_name, "output format: csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", c.out, "output file (default: stdout)");
  if (plot) {
    app.add_flag("--emit-plot-script", c.emit_plot_script, "also write a gnuplot script <out>.gp");
  }
}

void add_worker_flag(CLI::App& app, RunConfig& c) {
  app.add_option("--workers", c.workers, "worker threads (output does not depend on it)");
}

}  // namespace

sweep::GridSpec RunConfig::grid_spec() const {
  sweep::GridSpec s;
  s.e_bar_min = e_min.value_or(0.1);
  s.e_bar_max = e_max.value_or(5.0);
  s.t_bar_min = t_min.value_or(0.1);
  s.t_bar_max = t_max.value_or(5.0);
  s.n_e = n_e.value_or(80);
  s.n_t = n_t.value_or(80);
  s.spacing = log_spacing ? sweep::Spacing::Log : sweep::Spacing::Linear;
  return s;
}

double RunConfig::effective_rel_tol() const {
  return rel_tol.value_or(command == Command::Compute ? 1e-6 : 1e-5);
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  std::string format_name = "csv";
  c.workers = std::max(1u, std::thread::hardware_concurrency());

  CLI::App app{"Coherence extracted by an Unruh-DeWitt detector from a Gaussian coherent field "
               "(1+1 Minkowski), reported as C/g in units of the detector gap.",
               kProgram};
  app.set_config("--config", "", "read options from a TOML/INI file (flags take precedence)");
  app.require_subcommand(1);

  auto* compute = app.add_subcommand("compute", "single evaluation of C/g");
  compute->add_option("--e-bar", c.e_bar, "reduced field energy E/Omega");
  compute->add_option("--t-bar", c.t_bar, "reduced interaction duration Omega*T");
  compute->add_option("--coupling", c.coupling, "coupling g; enables the perturbative-validity check");
  add_trajectory_flags(*compute, c);
  add_output_flags(*compute, c, format_name, false);

  auto* sweep_cmd = app.add_subcommand("sweep", "C/g over an (E/Omega, Omega*T) grid");
  add_trajectory_flags(*sweep_cmd, c);
  add_grid_flags(*sweep_cmd, c);
  add_worker_flag(*sweep_cmd, c);
  add_output_flags(*sweep_cmd, c, format_name, true);

  auto* diff = app.add_subcommand(
      "diff", "moving minus rest grid, from two sweep files or computed from the flags");
  diff->add_option("inputs", c.inputs, "minuend and subtrahend sweep files");
  add_trajectory_flags(*diff, c);
  add_grid_flags(*diff, c);
  add_worker_flag(*diff, c);
  add_output_flags(*diff, c, format_name, true);

  auto* regions = app.add_subcommand(
      "regions", "swelling regions of a diff file, or of a diff computed from the flags");
  regions->add_option("inputs", c.inputs, "diff file");
  regions->add_option("--threshold", c.threshold, "minimum C_moving - C_0 (default 0)");
  add_trajectory_flags(*regions, c);
  add_grid_flags(*regions, c);
  add_worker_flag(*regions, c);
  add_output_flags(*regions, c, format_name, true);

  auto* curve = app.add_subcommand("curve", "C/g against Omega*T at fixed E/Omega");
  curve->add_option("--e-bar", c.e_bar, "reduced field energy E/Omega");
  curve->add_option("--t-min", c.t_min, "first Omega*T sample (default 0.05)");
  curve->add_option("--t-max", c.t_max, "last Omega*T sample (default 5)");
  curve->add_option("--n-t", c.n_t, "number of samples (default 100)");
  curve->add_option("--trajectory", c.trajectories,
                    "trajectory tag (rest, velocity:<v>, acceleration:<a>); repeatable. "
                    "Default: rest, velocity:0.8, acceleration:2");
  add_trajectory_flags(*curve, c);
  add_worker_flag(*curve, c);
  add_output_flags(*curve, c, format_name, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  c.coupling_given = compute->count("--coupling") > 0;
  c.format = format_name == "json" ? Format::Json : Format::Csv;
  if (compute->parsed()) c.command = Command::Compute;
  if (sweep_cmd->parsed()) c.command = Command::Sweep;
  if (diff->parsed()) c.command = Command::Diff;
  if (regions->parsed()) c.command = Command::Regions;
  if (curve->parsed()) c.command = Command::Curve;
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto fail = [&](const char* category, const std::string& message, int code) {
    err << kProgram << ": error[" << category << "]: " << message << '\n';
    return code;
  };
  try {
    validate_common(config);
    switch (config.command) {
      case Command::Compute:
        return run_compute(config, out, err);
      case Command::Sweep:
        return run_sweep(config, out, err);
      case Command::Diff:
        return run_diff(config, out, err);
      case Command::Regions:
        return run_regions(config, out, err);
      case Command::Curve:
        return run_curve(config, out, err);
    }
    return fail("usage", "unknown command", kExitUsage);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), kExitValidation);
  } catch (const sweep::SweepError& e) {
    const int code = fail("computation", e.what(), kExitComputation);
    report_flagged(e.grid(), err);
    return code;
  } catch (const qfield::CoherenceError& e) {
    return fail("computation", e.what(), kExitComputation);
  } catch (const IoError& e) {
    return fail("io", e.what(), kExitComputation);
  } catch (const ParseError& e) {
    return fail("validation", e.what(), kExitValidation);
  } catch (const std::domain_error& e) {
    return fail("validation", e.what(), kExitValidation);
  } catch (const std::invalid_argument& e) {
    return fail("validation", e.what(), kExitValidation);
  } catch (const std::exception& e) {
    return fail("computation", e.what(), kExitComputation);
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_args(argc, argv, out);
  } catch (const UsageError& e) {
    err << kProgram << ": error[usage]: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!config) return kExitSuccess;
  return run(*config, out, err);
}

}  // namespace udw::cli
