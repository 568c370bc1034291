#include "udw/cli/serialize.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

namespace udw::cli {

namespace {

using nlohmann::json;
using sweep::Array2D;
using sweep::CellIndex;
using sweep::GridSpec;
using sweep::Spacing;

// ---- text helpers ---------------------------------------------------------

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  auto lines = split(text, '\n');
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::size_t parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("not an index: '" + std::string(s) + "'");
  }
  return v;
}

struct CsvTable {
  std::vector<std::string_view> header;
  std::vector<std::vector<double>> rows;
};

CsvTable parse_csv(std::string_view text, const std::vector<std::string>& expected_header) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("empty CSV input");
  CsvTable table;
  table.header = split(lines.front(), ',');
  if (!expected_header.empty()) {
    const bool same = std::equal(table.header.begin(), table.header.end(),
                                 expected_header.begin(), expected_header.end());
    if (!same) {
      throw ParseError("unexpected CSV header '" + std::string(lines.front()) + "'");
    }
  }
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto fields = split(lines[k], ',');
    if (fields.size() != table.header.size()) {
      throw ParseError("CSV line " + std::to_string(k + 1) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(table.header.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_double(f));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string join_row(std::initializer_list<double> values) {
  std::string line;
  bool first = true;
  for (double v : values) {
    if (!first) line += ',';
    line += format_number(v);
    first = false;
  }
  line += '\n';
  return line;
}

// ---- grid helpers -----------------------------------------------------------

std::string_view spacing_name(Spacing s) { return s == Spacing::Linear ? "linear" : "log"; }

Spacing spacing_from(const std::string& name) {
  if (name == "linear") return Spacing::Linear;
  if (name == "log") return Spacing::Log;
  throw ParseError("unknown spacing '" + name + "'");
}

json spec_json(const GridSpec& s) {
  return json{{"e_bar_min", s.e_bar_min}, {"e_bar_max", s.e_bar_max}, {"t_bar_min", s.t_bar_min},
              {"t_bar_max", s.t_bar_max}, {"n_e", s.n_e},             {"n_t", s.n_t},
              {"spacing", spacing_name(s.spacing)}};
}

GridSpec spec_from(const json& j) {
  GridSpec s;
  s.e_bar_min = j.at("e_bar_min").get<double>();
  s.e_bar_max = j.at("e_bar_max").get<double>();
  s.t_bar_min = j.at("t_bar_min").get<double>();
  s.t_bar_max = j.at("t_bar_max").get<double>();
  s.n_e = j.at("n_e").get<std::size_t>();
  s.n_t = j.at("n_t").get<std::size_t>();
  s.spacing = spacing_from(j.at("spacing").get<std::string>());
  return s;
}

json array_json(const Array2D& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Array2D array_from(const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw ParseError("array has wrong number of rows");
  Array2D a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != cols) throw ParseError("array row has wrong length");
    for (std::size_t j2 = 0; j2 < cols; ++j2) a(i, j2) = row[j2].get<double>();
  }
  return a;
}

json cells_json(const std::vector<CellIndex>& cells) {
  json out = json::array();
  for (const auto& [i, j] : cells) out.push_back(json::array({i, j}));
  return out;
}

std::vector<CellIndex> cells_from(const json& j) {
  std::vector<CellIndex> out;
  for (const auto& c : j) out.emplace_back(c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>());
  return out;
}

json grid_body(const GridSpec& spec, const Array2D& values, const Array2D& errors) {
  return json{{"spec", spec_json(spec)},
              {"axes", {{"e_over_omega", spec.e_axis()}, {"omega_t", spec.t_axis()}}},
              {"values", array_json(values)},
              {"errors", array_json(errors)}};
}

// Rebuilds a GridSpec from axis samples written at 12 significant digits.
GridSpec infer_spec(const std::vector<double>& e_axis, const std::vector<double>& t_axis) {
  if (e_axis.size() < 2 || t_axis.size() < 2) throw ParseError("grid needs >= 2 points per axis");
  GridSpec s;
  s.e_bar_min = e_axis.front();
  s.e_bar_max = e_axis.back();
  s.t_bar_min = t_axis.front();
  s.t_bar_max = t_axis.back();
  s.n_e = e_axis.size();
  s.n_t = t_axis.size();
  auto matches = [](const std::vector<double>& got, const std::vector<double>& want) {
    for (std::size_t k = 0; k < got.size(); ++k) {
      if (std::abs(got[k] - want[k]) > 1e-10 * std::abs(want[k])) return false;
    }
    return true;
  };
  s.spacing = Spacing::Linear;
  if (!matches(e_axis, s.e_axis()) || !matches(t_axis, s.t_axis())) s.spacing = Spacing::Log;
  return s;
}

struct CsvGrid {
  GridSpec spec;
  Array2D values;
  Array2D errors;
};

CsvGrid parse_csv_grid(std::string_view text, const std::string& value_column) {
  const CsvTable table = parse_csv(text, {"e_over_omega", "omega_t", value_column, "err"});
  if (table.rows.empty()) throw ParseError("grid CSV has no data rows");
  std::vector<double> t_axis;
  for (const auto& r : table.rows) {
    if (r[0] != table.rows.front()[0]) break;
    t_axis.push_back(r[1]);
  }
  const std::size_t n_t = t_axis.size();
  if (table.rows.size() % n_t != 0) throw ParseError("grid CSV is not rectangular");
  const std::size_t n_e = table.rows.size() / n_t;
  std::vector<double> e_axis;
  CsvGrid out;
  out.values = Array2D(n_e, n_t);
  out.errors = Array2D(n_e, n_t);
  for (std::size_t i = 0; i < n_e; ++i) {
    e_axis.push_back(table.rows[i * n_t][0]);
    for (std::size_t j = 0; j < n_t; ++j) {
      const auto& r = table.rows[i * n_t + j];
      if (r[0] != e_axis.back() || r[1] != t_axis[j]) {
        throw ParseError("grid CSV rows are not in row-major axis order");
      }
      out.values(i, j) = r[2];
      out.errors(i, j) = r[3];
    }
  }
  out.spec = infer_spec(e_axis, t_axis);
  return out;
}

std::string csv_grid(const GridSpec& spec, const Array2D& values, const Array2D& errors,
                     const char* value_column) {
  std::string out = fmt::format("e_over_omega,omega_t,{},err\n", value_column);
  const auto e_axis = spec.e_axis();
  const auto t_axis = spec.t_axis();
  for (std::size_t i = 0; i < spec.n_e; ++i) {
    for (std::size_t j = 0; j < spec.n_t; ++j) {
      out += join_row({e_axis[i], t_axis[j], values(i, j), errors(i, j)});
    }
  }
  return out;
}

json parse_json(std::string_view text, const char* kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("kind", "") != kind) {
    throw ParseError(std::string("expected a JSON object of kind '") + kind + "'");
  }
  return j;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON content: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(std::string("invalid content: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid content: ") + e.what());
  }
}

void recompute_components(sweep::SwellingReport& report) {
  std::map<std::size_t, sweep::SwellingComponent> by_id;
  for (const auto& c : report.cells) {
    auto [it, fresh] = by_id.try_emplace(c.component);
    auto& comp = it->second;
    if (fresh) {
      comp.id = c.component;
      comp.i_min = comp.i_max = c.i;
      comp.j_min = comp.j_max = c.j;
      comp.e_bar_min = comp.e_bar_max = c.e_bar;
      comp.t_bar_min = comp.t_bar_max = c.t_bar;
      comp.peak_i = c.i;
      comp.peak_j = c.j;
      comp.peak_diff = c.diff;
    }
    ++comp.size;
    if (c.i < comp.i_min) { comp.i_min = c.i; comp.e_bar_min = c.e_bar; }
    if (c.i > comp.i_max) { comp.i_max = c.i; comp.e_bar_max = c.e_bar; }
    if (c.j < comp.j_min) { comp.j_min = c.j; comp.t_bar_min = c.t_bar; }
    if (c.j > comp.j_max) { comp.j_max = c.j; comp.t_bar_max = c.t_bar; }
    if (c.diff > comp.peak_diff) {
      comp.peak_diff = c.diff;
      comp.peak_i = c.i;
      comp.peak_j = c.j;
    }
  }
  report.components.clear();
  for (auto& [id, comp] : by_id) report.components.push_back(comp);
}

}  // namespace

std::string_view to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

std::string format_number(double x) {
  if (x == 0.0) return "0.000000000000";
  return fmt::format("{:.12g}", x);
}

Format detect_format(std::string_view text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string_view::npos && text[pos] == '{' ? Format::Json : Format::Csv;
}

// ---- sweep ------------------------------------------------------------------

std::string serialize(const sweep::SweepGrid& grid, Format format) {
  if (format == Format::Csv) return csv_grid(grid.spec, grid.values, grid.errors, "c_over_g");
  json j = grid_body(grid.spec, grid.values, grid.errors);
  j["kind"] = "sweep";
  j["trajectory"] = grid.trajectory ? qfield::trajectory_tag(*grid.trajectory) : "unknown";
  j["meta"] = {{"rel_tol", grid.meta.rel_tol},
               {"flagged_count", grid.meta.flagged.size()},
               {"flagged", cells_json(grid.meta.flagged)}};
  return j.dump(1) + "\n";
}

sweep::SweepGrid parse_sweep_grid(std::string_view text, Format format) {
  sweep::SweepGrid grid;
  if (format == Format::Csv) {
    CsvGrid g = parse_csv_grid(text, "c_over_g");
    grid.spec = g.spec;
    grid.values = std::move(g.values);
    grid.errors = std::move(g.errors);
    return grid;
  }
  return guarded([&] {
    const json j = parse_json(text, "sweep");
    grid.spec = spec_from(j.at("spec"));
    grid.spec.validate();
    const std::string tag = j.at("trajectory").get<std::string>();
    if (tag != "unknown") grid.trajectory = qfield::parse_trajectory_tag(tag);
    grid.values = array_from(j.at("values"), grid.spec.n_e, grid.spec.n_t);
    grid.errors = array_from(j.at("errors"), grid.spec.n_e, grid.spec.n_t);
    const json& meta = j.at("meta");
    grid.meta.rel_tol = meta.at("rel_tol").get<double>();
    grid.meta.flagged = cells_from(meta.at("flagged"));
    return grid;
  });
}

// ---- diff -------------------------------------------------------------------

std::string serialize(const sweep::DiffGrid& grid, Format format) {
  if (format == Format::Csv) return csv_grid(grid.spec, grid.values, grid.errors, "dc_over_g");
  json j = grid_body(grid.spec, grid.values, grid.errors);
  j["kind"] = "diff";
  j["trajectory"] = {{"minuend", grid.minuend_tag}, {"subtrahend", grid.subtrahend_tag}};
  j["meta"] = {{"flagged_count", grid.flagged.size()}, {"flagged", cells_json(grid.flagged)}};
  return j.dump(1) + "\n";
}

sweep::DiffGrid parse_diff_grid(std::string_view text, Format format) {
  sweep::DiffGrid grid;
  if (format == Format::Csv) {
    CsvGrid g = parse_csv_grid(text, "dc_over_g");
    grid.spec = g.spec;
    grid.values = std::move(g.values);
    grid.errors = std::move(g.errors);
    grid.minuend_tag = grid.subtrahend_tag = "unknown";
    return grid;
  }
  return guarded([&] {
    const json j = parse_json(text, "diff");
    grid.spec = spec_from(j.at("spec"));
    grid.spec.validate();
    grid.minuend_tag = j.at("trajectory").at("minuend").get<std::string>();
    grid.subtrahend_tag = j.at("trajectory").at("subtrahend").get<std::string>();
    grid.values = array_from(j.at("values"), grid.spec.n_e, grid.spec.n_t);
    grid.errors = array_from(j.at("errors"), grid.spec.n_e, grid.spec.n_t);
    grid.flagged = cells_from(j.at("meta").at("flagged"));
    return grid;
  });
}

// ---- regions ----------------------------------------------------------------

std::string serialize(const sweep::SwellingReport& report, Format format) {
  if (format == Format::Csv) {
    std::string out = "i,j,e_over_omega,omega_t,dc_over_g,component\n";
    for (const auto& c : report.cells) {
      out += fmt::format("{},{},{},{},{},{}\n", c.i, c.j, format_number(c.e_bar),
                         format_number(c.t_bar), format_number(c.diff), c.component);
    }
    return out;
  }
  json cells = json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"i", c.i},
                     {"j", c.j},
                     {"e_over_omega", c.e_bar},
                     {"omega_t", c.t_bar},
                     {"dc_over_g", c.diff},
                     {"component", c.component}});
  }
  json comps = json::array();
  for (const auto& c : report.components) {
    comps.push_back({{"id", c.id},
                     {"size", c.size},
                     {"bbox",
                      {{"i_min", c.i_min},
                       {"i_max", c.i_max},
                       {"j_min", c.j_min},
                       {"j_max", c.j_max},
                       {"e_over_omega_min", c.e_bar_min},
                       {"e_over_omega_max", c.e_bar_max},
                       {"omega_t_min", c.t_bar_min},
                       {"omega_t_max", c.t_bar_max}}},
                     {"peak", {{"i", c.peak_i}, {"j", c.peak_j}, {"dc_over_g", c.peak_diff}}}});
  }
  json j{{"kind", "regions"},
         {"threshold", report.threshold},
         {"cells", std::move(cells)},
         {"components", std::move(comps)}};
  return j.dump(1) + "\n";
}

sweep::SwellingReport parse_swelling_report(std::string_view text, Format format) {
  sweep::SwellingReport report;
  if (format == Format::Csv) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines.front() != "i,j,e_over_omega,omega_t,dc_over_g,component") {
      throw ParseError("unexpected regions CSV header");
    }
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto f = split(lines[k], ',');
      if (f.size() != 6) throw ParseError("regions CSV line " + std::to_string(k + 1));
      report.cells.push_back({parse_index(f[0]), parse_index(f[1]), parse_double(f[2]),
                              parse_double(f[3]), parse_double(f[4]), parse_index(f[5])});
    }
    recompute_components(report);
    return report;
  }
  return guarded([&] {
    const json j = parse_json(text, "regions");
    report.threshold = j.at("threshold").get<double>();
    for (const auto& c : j.at("cells")) {
      report.cells.push_back({c.at("i").get<std::size_t>(), c.at("j").get<std::size_t>(),
                              c.at("e_over_omega").get<double>(), c.at("omega_t").get<double>(),
                              c.at("dc_over_g").get<double>(),
                              c.at("component").get<std::size_t>()});
    }
    for (const auto& c : j.at("components")) {
      sweep::SwellingComponent comp;
      comp.id = c.at("id").get<std::size_t>();
      comp.size = c.at("size").get<std::size_t>();
      const json& b = c.at("bbox");
      comp.i_min = b.at("i_min").get<std::size_t>();
      comp.i_max = b.at("i_max").get<std::size_t>();
      comp.j_min = b.at("j_min").get<std::size_t>();
      comp.j_max = b.at("j_max").get<std::size_t>();
      comp.e_bar_min = b.at("e_over_omega_min").get<double>();
      comp.e_bar_max = b.at("e_over_omega_max").get<double>();
      comp.t_bar_min = b.at("omega_t_min").get<double>();
      comp.t_bar_max = b.at("omega_t_max").get<double>();
      const json& p = c.at("peak");
      comp.peak_i = p.at("i").get<std::size_t>();
      comp.peak_j = p.at("j").get<std::size_t>();
      comp.peak_diff = p.at("dc_over_g").get<double>();
      report.components.push_back(comp);
    }
    return report;
  });
}

// ---- curve ------------------------------------------------------------------

std::string serialize(const sweep::DecoherenceCurve& curve, Format format) {
  if (format == Format::Csv) {
    std::string out = "omega_t";
    for (const auto& tag : curve.tags) out += "," + tag;
    out += '\n';
    for (std::size_t i = 0; i < curve.t_bar.size(); ++i) {
      out += format_number(curve.t_bar[i]);
      for (std::size_t c = 0; c < curve.tags.size(); ++c) {
        out += ',' + format_number(curve.values(i, c));
      }
      out += '\n';
    }
    return out;
  }
  json j{{"kind", "curve"},
         {"e_over_omega", curve.e_bar},
         {"trajectories", curve.tags},
         {"omega_t", curve.t_bar},
         {"values", array_json(curve.values)},
         {"errors", array_json(curve.errors)},
         {"meta", {{"flagged_count", curve.flagged.size()}, {"flagged", cells_json(curve.flagged)}}}};
  return j.dump(1) + "\n";
}

sweep::DecoherenceCurve parse_decoherence_curve(std::string_view text, Format format) {
  sweep::DecoherenceCurve curve;
  if (format == Format::Csv) {
    const CsvTable table = parse_csv(text, {});
    if (table.header.size() < 2 || table.header.front() != "omega_t") {
      throw ParseError("unexpected curve CSV header");
    }
    for (std::size_t c = 1; c < table.header.size(); ++c) {
      curve.tags.emplace_back(table.header[c]);
    }
    const std::size_t k = curve.tags.size();
    curve.values = Array2D(table.rows.size(), k);
    curve.errors = Array2D(table.rows.size(), k);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      curve.t_bar.push_back(table.rows[i][0]);
      for (std::size_t c = 0; c < k; ++c) curve.values(i, c) = table.rows[i][c + 1];
    }
    return curve;
  }
  return guarded([&] {
    const json j = parse_json(text, "curve");
    curve.e_bar = j.at("e_over_omega").get<double>();
    curve.tags = j.at("trajectories").get<std::vector<std::string>>();
    curve.t_bar = j.at("omega_t").get<std::vector<double>>();
    curve.values = array_from(j.at("values"), curve.t_bar.size(), curve.tags.size());
    curve.errors = array_from(j.at("errors"), curve.t_bar.size(), curve.tags.size());
    curve.flagged = cells_from(j.at("meta").at("flagged"));
    return curve;
  });
}

// ---- single point -------------------------------------------------------------

std::string serialize_point(const std::string& trajectory_tag, double e_bar, double t_bar,
                            const qfield::CoherenceResult& result, Format format) {
  if (format == Format::Csv) {
    return "e_over_omega,omega_t,c_over_g,err\n" +
           join_row({e_bar, t_bar, result.c_over_g, result.err_estimate});
  }
  json j{{"kind", "point"},
         {"trajectory", trajectory_tag},
         {"e_over_omega", e_bar},
         {"omega_t", t_bar},
         {"c_over_g", result.c_over_g},
         {"rho_coh_over_g", {result.rho_coh_over_g.real(), result.rho_coh_over_g.imag()}},
         {"err", result.err_estimate},
         {"method", qfield::to_string(result.method)},
         {"warnings", result.warnings}};
  return j.dump(1) + "\n";
}

// ---- files ------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

}  // namespace udw::cli
