#pragma once

// Trace CSV export/import and static SVG figures.

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lyap/lyapunov.hpp"
#include "lyap/trace.hpp"

namespace lyap {

namespace detail {

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace detail

/// Header `iter,objective_gap,distance,lyapunov`, one row per iterate; the
/// lyapunov cell is empty for k < 2. When a report is given a `violation`
/// column (1 where V increased beyond tolerance) is appended.
inline void write_trace_csv(std::ostream& os, const Trace& t,
                            const MonotonicityReport* report = nullptr) {
  os << "iter,objective_gap,distance,lyapunov";
  if (report) os << ",violation";
  os << '\n';
  std::vector<char> flagged(t.size(), 0);
  if (report) {
    for (const auto& v : report->violations) {
      if (v.index >= 0 && static_cast<std::size_t>(v.index) < flagged.size()) {
        flagged[static_cast<std::size_t>(v.index)] = 1;
      }
    }
  }
  const auto start = static_cast<std::size_t>(t.lyapunov.start_index);
  for (std::size_t k = 0; k < t.size(); ++k) {
    os << k << ',' << detail::format_number(t.objective_gap[k]) << ','
       << detail::format_number(t.distance[k]) << ',';
    if (k >= start && k - start < t.lyapunov.values.size()) {
      os << detail::format_number(t.lyapunov.values[k - start]);
    }
    if (report) os << ',' << static_cast<int>(flagged[k]);
    os << '\n';
  }
}

inline void export_csv(const Trace& t, const std::filesystem::path& path,
                       const MonotonicityReport* report = nullptr) {
  auto out = detail::open_for_write(path);
  write_trace_csv(out, t, report);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

struct TraceTable {
  std::vector<int> iter;
  std::vector<double> objective_gap;
  std::vector<double> distance;
  LyapunovSeries lyapunov;
};

/// Parses what write_trace_csv produces (extra columns are ignored).
inline TraceTable read_trace_csv(std::istream& in, double tolerance = kMonotoneTol) {
  TraceTable table;
  table.lyapunov.tolerance = tolerance;
  std::string line;
  if (!std::getline(in, line) || line.rfind("iter,objective_gap,distance,lyapunov", 0) != 0) {
    throw std::runtime_error("not a trace CSV (bad header)");
  }
  bool seen_v = false;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() < 4) {
      throw std::runtime_error("trace CSV line " + std::to_string(line_no) +
                               ": expected 4 columns");
    }
    try {
      table.iter.push_back(std::stoi(cells[0]));
      table.objective_gap.push_back(std::stod(cells[1]));
      table.distance.push_back(std::stod(cells[2]));
      if (!cells[3].empty()) {
        if (!seen_v) table.lyapunov.start_index = table.iter.back();
        seen_v = true;
        table.lyapunov.values.push_back(std::stod(cells[3]));
      }
    } catch (const std::logic_error&) {
      throw std::runtime_error("trace CSV line " + std::to_string(line_no) +
                               ": bad number");
    }
  }
  return table;
}

inline TraceTable read_trace_csv(const std::filesystem::path& path,
                                 double tolerance = kMonotoneTol) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_trace_csv(in, tolerance);
}

// ---------------------------------------------------------------------------
// SVG

struct Series {
  std::string label;
  std::vector<double> y;  // x is the index
};

/// Line plot with a log10 y axis; non-positive values leave gaps.
struct LinePanel {
  std::string title;
  std::vector<Series> series;
};

struct ScatterGroup {
  std::string label;
  std::vector<std::complex<double>> points;
};

/// Complex-plane scatter with the unit circle drawn for reference.
struct ScatterPanel {
  std::string title;
  std::vector<ScatterGroup> groups;
};

using Panel = std::variant<LinePanel, ScatterPanel>;

namespace detail {

inline constexpr double kPanelW = 420.0;
inline constexpr double kPanelH = 320.0;
inline constexpr double kMarginL = 60.0, kMarginR = 15.0, kMarginT = 30.0, kMarginB = 40.0;

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline void legend(std::ostream& os, double x, double y,
                   const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double yy = y + 14.0 * static_cast<double>(i);
    os << "<rect class=\"legend-key\" x=\"" << x << "\" y=\"" << yy - 8
       << "\" width=\"10\" height=\"10\" fill=\"" << palette(i) << "\"/>"
       << "<text x=\"" << x + 14 << "\" y=\"" << yy + 1
       << "\" font-size=\"11\">" << escape(labels[i]) << "</text>\n";
  }
}

inline void frame(std::ostream& os, const std::string& title) {
  os << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
     << kPanelW - kMarginL - kMarginR << "\" height=\"" << kPanelH - kMarginT - kMarginB
     << "\" fill=\"none\" stroke=\"#444\"/>\n"
     << "<text x=\"" << kPanelW / 2 << "\" y=\"18\" text-anchor=\"middle\" "
     << "font-size=\"13\">" << escape(title) << "</text>\n";
}

inline void render_line(std::ostream& os, const LinePanel& panel) {
  if (panel.series.empty()) throw std::invalid_argument("line panel has no series");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t n_max = 1;
  for (const auto& s : panel.series) {
    n_max = std::max(n_max, s.y.size());
    for (double v : s.y) {
      if (v > 0.0 && std::isfinite(v)) {
        lo = std::min(lo, std::log10(v));
        hi = std::max(hi, std::log10(v));
      }
    }
  }
  if (!std::isfinite(lo)) { lo = -1.0; hi = 1.0; }
  if (hi - lo < 1e-12) { lo -= 1.0; hi += 1.0; }
  lo = std::floor(lo);
  hi = std::ceil(hi);

  const double w = kPanelW - kMarginL - kMarginR;
  const double h = kPanelH - kMarginT - kMarginB;
  const double x_span = static_cast<double>(std::max<std::size_t>(n_max - 1, 1));
  auto px = [&](std::size_t k) { return kMarginL + w * static_cast<double>(k) / x_span; };
  auto py = [&](double v) { return kMarginT + h * (hi - std::log10(v)) / (hi - lo); };

  frame(os, panel.title);
  const int decade_step = std::max(1, static_cast<int>((hi - lo) / 8.0 + 0.999));
  for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); d += decade_step) {
    const double y = kMarginT + h * (hi - d) / (hi - lo);
    os << "<text x=\"" << kMarginL - 4 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-size=\"10\">1e" << d << "</text>\n";
  }
  os << "<text x=\"" << kMarginL + w / 2 << "\" y=\"" << kPanelH - 8
     << "\" text-anchor=\"middle\" font-size=\"11\">iteration (0.." << n_max - 1
     << ")</text>\n";

  std::vector<std::string> labels;
  os << std::setprecision(6);
  for (std::size_t i = 0; i < panel.series.size(); ++i) {
    const auto& s = panel.series[i];
    labels.push_back(s.label);
    std::ostringstream pts;
    pts << std::setprecision(6);
    std::size_t count = 0;
    auto flush = [&] {
      if (count > 0) {
        os << "<polyline fill=\"none\" stroke=\"" << palette(i)
           << "\" stroke-width=\"1.2\" points=\"" << pts.str() << "\"/>\n";
      }
      pts.str("");
      count = 0;
    };
    for (std::size_t k = 0; k < s.y.size(); ++k) {
      const double v = s.y[k];
      if (!(v > 0.0) || !std::isfinite(v)) {
        flush();
        continue;
      }
      pts << (count ? " " : "") << px(k) << ',' << py(v);
      ++count;
    }
    flush();
  }
  legend(os, kPanelW - 110, kMarginT + 14, labels);
}

inline void render_scatter(std::ostream& os, const ScatterPanel& panel) {
  if (panel.groups.empty()) throw std::invalid_argument("scatter panel has no groups");
  double extent = 1.0;
  for (const auto& g : panel.groups)
    for (const auto& z : g.points)
      extent = std::max({extent, std::abs(z.real()), std::abs(z.imag())});
  extent *= 1.05;

  const double w = kPanelW - kMarginL - kMarginR;
  const double h = kPanelH - kMarginT - kMarginB;
  const double side = std::min(w, h);
  const double cx = kMarginL + w / 2;
  const double cy = kMarginT + h / 2;
  const double scale = side / (2.0 * extent);

  frame(os, panel.title);
  os << std::setprecision(6);
  os << "<line x1=\"" << cx - side / 2 << "\" y1=\"" << cy << "\" x2=\"" << cx + side / 2
     << "\" y2=\"" << cy << "\" stroke=\"#bbb\"/>\n"
     << "<line x1=\"" << cx << "\" y1=\"" << cy - side / 2 << "\" x2=\"" << cx
     << "\" y2=\"" << cy + side / 2 << "\" stroke=\"#bbb\"/>\n"
     << "<circle class=\"unit\" cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << scale
     << "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < panel.groups.size(); ++i) {
    labels.push_back(panel.groups[i].label);
    for (const auto& z : panel.groups[i].points) {
      os << "<circle class=\"eig\" cx=\"" << cx + scale * z.real() << "\" cy=\""
         << cy - scale * z.imag() << "\" r=\"2.2\" fill=\"" << palette(i) << "\"/>\n";
    }
  }
  legend(os, kPanelW - 110, kMarginT + 14, labels);
}

}  // namespace detail

/// Standalone SVG document; panels are laid out left to right.
inline std::string svg_document(const std::vector<Panel>& panels) {
  if (panels.empty()) throw std::invalid_argument("nothing to render");
  std::ostringstream os;
  const double width = detail::kPanelW * static_cast<double>(panels.size());
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << detail::kPanelH << "\" viewBox=\"0 0 " << width << ' ' << detail::kPanelH
     << "\" font-family=\"sans-serif\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    os << "<g class=\"panel\" transform=\"translate(" << detail::kPanelW * static_cast<double>(i)
       << ",0)\">\n";
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, LinePanel>) {
            detail::render_line(os, p);
          } else {
            detail::render_scatter(os, p);
          }
        },
        panels[i]);
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void render_svg(const std::vector<Panel>& panels,
                       const std::filesystem::path& path) {
  const std::string doc = svg_document(panels);
  auto out = detail::open_for_write(path);
  out << doc;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace lyap
