#include "udw/cli/plot_script.hpp"

#include <fmt/format.h>

namespace udw::cli {

namespace {

std::string preamble(const std::string& data_file, const std::string& title) {
  return fmt::format(
      "# gnuplot script generated by udw-coherence\n"
      "set terminal pngcairo size 900,700\n"
      "set output '{0}.png'\n"
      "set datafile separator ','\n"
      "set title \"{1}\"\n",
      data_file, title);
}

}  // namespace

std::string heatmap_script(const std::string& data_file, const sweep::GridSpec& spec,
                           const std::string& title, bool diverging) {
  std::string s = preamble(data_file, title);
  s += "set xlabel 'E/{/Symbol W}'\nset ylabel '{/Symbol W}T'\n";
  s += fmt::format("set xrange [{}:{}]\nset yrange [{}:{}]\n", spec.e_bar_min, spec.e_bar_max,
                   spec.t_bar_min, spec.t_bar_max);
  if (diverging) {
    s += "set palette defined (-1 'blue', 0 'white', 1 'red')\n";
    s += "stats '" + data_file + "' skip 1 using 3 nooutput\n";
    s += "lim = (abs(STATS_min) > abs(STATS_max)) ? abs(STATS_min) : abs(STATS_max)\n";
    s += "set cbrange [-lim:lim]\n";
    s += "set cblabel '(C_{moving} - C_{0})/g'\n";
  } else {
    s += "set palette rgbformulae 33,13,10\nset cblabel 'C/g'\n";
  }
  if (spec.spacing == sweep::Spacing::Log) {
    s += "set logscale xy\n";
    s += "plot '" + data_file +
         "' skip 1 using 1:2:3 with points pointtype 5 pointsize 1 palette notitle\n";
  } else {
    s += "plot '" + data_file + "' skip 1 using 1:2:3 with image notitle\n";
  }
  return s;
}

std::string curve_script(const std::string& data_file, const std::vector<std::string>& tags,
                         double e_bar) {
  std::string s = preamble(data_file, fmt::format("C/g at E = {}{{/Symbol W}}", e_bar));
  s += "set xlabel '{/Symbol W}T'\nset ylabel 'C/g'\nset key top right\n";
  s += "plot ";
  for (std::size_t c = 0; c < tags.size(); ++c) {
    if (c > 0) s += ", \\\n     ";
    s += fmt::format("'{}' skip 1 using 1:{} with lines linewidth 2 title '{}'", data_file, c + 2,
                     tags[c]);
  }
  s += '\n';
  return s;
}

std::string regions_script(const std::string& data_file, const std::string& title) {
  std::string s = preamble(data_file, title);
  s += "set xlabel 'E/{/Symbol W}'\nset ylabel '{/Symbol W}T'\nset cblabel 'component'\n";
  s += "plot '" + data_file +
       "' skip 1 using 3:4:6 with points pointtype 5 pointsize 1 palette notitle\n";
  return s;
}

}  // namespace udw::cli
