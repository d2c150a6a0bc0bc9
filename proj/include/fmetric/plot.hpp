#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fmetric/harness.hpp"

namespace fmetric {

enum class PlotKind { edges_vs_n, ratio_vs_n, queries_over_log_n, edges_vs_eps };

std::string_view to_string(PlotKind kind);
PlotKind parse_plot_kind(std::string_view name);

struct PlotSeries {
  std::string label;  // no spaces, e.g. blind_greedy:d2:eps0.1
  std::vector<std::pair<double, double>> points;  // sorted by x
};

/// One series per (generator, strategy, dim, eps) for the *_vs_n kinds and
/// per (generator, strategy, dim, n) for edges_vs_eps, in first-seen order.
std::vector<PlotSeries> plot_series(const std::vector<AggregateRow>& rows, PlotKind kind);

/// `# kind x y` header, then one `label x y` line per point.
void write_plot_text(std::ostream& out, PlotKind kind, const std::vector<PlotSeries>& series);

/// Polyline chart with labeled axes and a legend. Edge counts use log-log
/// axes; queries / log2(n) uses a log x axis.
void write_plot_svg(std::ostream& out, PlotKind kind, const std::vector<PlotSeries>& series);

struct PlotFiles {
  bool empty = true;  // no data rows: the text file is empty and no SVG is written
  std::string text_path;
  std::string svg_path;
};

/// Reads a raw or aggregate CSV written by run_experiment and writes
/// <out_stem>.txt (and <out_stem>.svg when `svg`).
PlotFiles emit_plot_data(const std::string& csv_path, PlotKind kind, const std::string& out_stem,
                         bool svg);

}  // namespace fmetric
