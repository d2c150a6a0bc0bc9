#include "fmetric/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "fmetric/error.hpp"

namespace fmetric {

std::string_view to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::edges_vs_n: return "edges_vs_n";
    case PlotKind::ratio_vs_n: return "ratio_vs_n";
    case PlotKind::queries_over_log_n: return "queries_over_log_n";
    case PlotKind::edges_vs_eps: return "edges_vs_eps";
  }
  return "?";
}

PlotKind parse_plot_kind(std::string_view name) {
  if (name == "edges_vs_n") return PlotKind::edges_vs_n;
  if (name == "ratio_vs_n") return PlotKind::ratio_vs_n;
  if (name == "queries_over_log_n") return PlotKind::queries_over_log_n;
  if (name == "edges_vs_eps") return PlotKind::edges_vs_eps;
  throw InvalidArgument("unknown plot kind '" + std::string(name) + "'");
}

namespace {

struct Axes {
  const char* x;
  const char* y;
  bool log_x;
  bool log_y;
};

Axes axes_for(PlotKind kind) {
  switch (kind) {
    case PlotKind::edges_vs_n: return {"n", "edges", true, true};
    case PlotKind::ratio_vs_n: return {"n", "edges / n", false, false};
    case PlotKind::queries_over_log_n: return {"n", "queries / log2 n", true, false};
    case PlotKind::edges_vs_eps: return {"eps", "edges", true, true};
  }
  return {"x", "y", false, false};
}

}  // namespace

std::vector<PlotSeries> plot_series(const std::vector<AggregateRow>& rows, PlotKind kind) {
  std::map<std::string, std::size_t> index;
  std::vector<PlotSeries> out;
  for (const auto& r : rows) {
    std::string label = std::string(to_string(r.generator)) + ':' + r.strategy + ":d" +
                        std::to_string(r.dim);
    double x = static_cast<double>(r.n);
    double y = r.mean_edges;
    switch (kind) {
      case PlotKind::edges_vs_n: label += ":eps" + format_number(r.eps); break;
      case PlotKind::ratio_vs_n:
        label += ":eps" + format_number(r.eps);
        y = r.mean_edges / x;
        break;
      case PlotKind::queries_over_log_n:
        label += ":eps" + format_number(r.eps);
        if (r.n < 2) continue;  // log2(1) = 0
        y = r.mean_queries / std::log2(x);
        break;
      case PlotKind::edges_vs_eps:
        label += ":n" + std::to_string(r.n);
        x = r.eps;
        break;
    }
    const auto [it, fresh] = index.emplace(label, out.size());
    if (fresh) out.push_back({label, {}});
    out[it->second].points.emplace_back(x, y);
  }
  for (auto& s : out) std::stable_sort(s.points.begin(), s.points.end());
  return out;
}

void write_plot_text(std::ostream& out, PlotKind kind, const std::vector<PlotSeries>& series) {
  const Axes axes = axes_for(kind);
  out << "# " << to_string(kind) << " x=" << axes.x << " y=" << axes.y << '\n';
  for (const auto& s : series)
    for (const auto& [x, y] : s.points)
      out << s.label << ' ' << format_number(x) << ' ' << format_number(y) << '\n';
}

namespace {

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 80, kRight = 230, kTop = 30, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Scale {
  double lo, hi;
  bool log;
  double pixel_lo, pixel_hi;

  double operator()(double v) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return pixel_lo + t * (pixel_hi - pixel_lo);
  }
};

Scale make_scale(double lo, double hi, bool log, double p0, double p1) {
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (lo == hi) hi = lo * 10.0;
  } else {
    if (lo > 0.0 && lo < 0.25 * hi) lo = 0.0;
    if (lo == hi) {
      lo -= 0.5 * std::max(1.0, std::abs(lo));
      hi += 0.5 * std::max(1.0, std::abs(hi));
    }
  }
  return {lo, hi, log, p0, p1};
}

std::vector<double> ticks(const Scale& s) {
  std::vector<double> out;
  if (s.log) {
    for (double v = s.lo; v <= s.hi * 1.0000001; v *= 10.0) out.push_back(v);
    return out;
  }
  for (int k = 0; k <= 5; ++k) out.push_back(s.lo + (s.hi - s.lo) * k / 5.0);
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_plot_svg(std::ostream& out, PlotKind kind, const std::vector<PlotSeries>& series) {
  const Axes axes = axes_for(kind);
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if ((axes.log_x && !(x > 0.0)) || (axes.log_y && !(y > 0.0))) continue;
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  if (!(xlo <= xhi)) xlo = 1, xhi = 10, ylo = 1, yhi = 10;
  const Scale sx = make_scale(xlo, xhi, axes.log_x, kLeft, kWidth - kRight);
  const Scale sy = make_scale(ylo, yhi, axes.log_y, kHeight - kBottom, kTop);

  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom);
  out << buf;
  for (double t : ticks(sx)) {
    const double px = sx(t);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%g\" x2=\"%.2f\" y2=\"%g\" stroke=\"#ddd\"/>"
                  "<text x=\"%.2f\" y=\"%g\" text-anchor=\"middle\">%s</text>\n",
                  px, kTop, px, kHeight - kBottom, px, kHeight - kBottom + 18,
                  tick_label(t).c_str());
    out << buf;
  }
  for (double t : ticks(sy)) {
    const double py = sy(t);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%.2f\" x2=\"%g\" y2=\"%.2f\" stroke=\"#ddd\"/>"
                  "<text x=\"%g\" y=\"%.2f\" text-anchor=\"end\">%s</text>\n",
                  kLeft, py, kWidth - kRight, py, kLeft - 6, py + 4, tick_label(t).c_str());
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s%s</text>\n"
                "<text x=\"18\" y=\"%g\" text-anchor=\"middle\" transform=\"rotate(-90 18 %g)\">"
                "%s%s</text>\n",
                (kLeft + kWidth - kRight) / 2, kHeight - 15, axes.x, axes.log_x ? " (log)" : "",
                (kTop + kHeight - kBottom) / 2, (kTop + kHeight - kBottom) / 2, axes.y,
                axes.log_y ? " (log)" : "");
  out << buf;

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : series[k].points) {
      if ((axes.log_x && !(x > 0.0)) || (axes.log_y && !(y > 0.0))) continue;
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", first ? "" : " ", sx(x), sy(y));
      out << buf;
      first = false;
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"/>",
                  kWidth - kRight + 12, ly, kWidth - kRight + 32, ly, color);
    out << buf << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly + 4 << "\">"
        << xml_escape(series[k].label) << "</text>\n";
  }
  out << "</svg>\n";
}

PlotFiles emit_plot_data(const std::string& csv_path, PlotKind kind, const std::string& out_stem,
                         bool svg) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot read " + csv_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const std::string header = text.substr(0, text.find('\n'));

  std::vector<AggregateRow> rows;
  if (!text.empty()) {
    std::istringstream csv(text);
    if (header.find("mean_edges") != std::string::npos)
      rows = read_aggregate_csv(csv);
    else
      rows = aggregate(read_raw_csv(csv));
  }

  PlotFiles files;
  files.text_path = out_stem + ".txt";
  const std::filesystem::path text_path(files.text_path);
  if (text_path.has_parent_path()) std::filesystem::create_directories(text_path.parent_path());
  std::ofstream txt(text_path);
  if (!txt) throw IoError("cannot write " + files.text_path);

  const auto series = plot_series(rows, kind);
  files.empty = series.empty();
  if (files.empty) return files;
  write_plot_text(txt, kind, series);
  if (svg) {
    files.svg_path = out_stem + ".svg";
    std::ofstream s(files.svg_path);
    if (!s) throw IoError("cannot write " + files.svg_path);
    write_plot_svg(s, kind, series);
  }
  return files;
}

}  // namespace fmetric
