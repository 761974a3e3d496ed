#pragma once

/// \file
/// Minimal SVG charts for aggregate and ensemble-width tables.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "intervalreg/harness/data.hpp"
#include "intervalreg/harness/experiment.hpp"

namespace intervalreg::harness {

struct Bar {
  std::string label;
  double value = 0.0;
  double error = 0.0;
};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  ///< (x, y), sorted by x
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Frame {
  double width = 720, height = 420, left = 70, right = 20, top = 40, bottom = 110;
  [[nodiscard]] double plot_w() const { return width - left - right; }
  [[nodiscard]] double plot_h() const { return height - top - bottom; }
};

inline void open_svg(std::ostringstream& os, const Frame& f, const std::string& title, const std::string& y_label) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << f.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << svg_escape(title)
     << "</text>\n"
     << "<text transform=\"translate(16," << f.top + f.plot_h() / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << svg_escape(y_label) << "</text>\n";
}

inline void y_axis(std::ostringstream& os, const Frame& f, double y_max) {
  os << "<line x1=\"" << f.left << "\" y1=\"" << f.top << "\" x2=\"" << f.left << "\" y2=\"" << f.top + f.plot_h()
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = y_max * i / 5.0;
    const double y = f.top + f.plot_h() * (1.0 - i / 5.0);
    os << "<line x1=\"" << f.left - 4 << "\" y1=\"" << num(y) << "\" x2=\"" << f.left + f.plot_w() << "\" y2=\""
       << num(y) << "\" stroke=\"#ddd\"/>\n"
       << "<text x=\"" << f.left - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << tick(v) << "</text>\n";
  }
}

}  // namespace detail

[[nodiscard]] inline std::string bar_chart_svg(const std::vector<Bar>& bars, const std::string& title,
                                               const std::string& y_label) {
  detail::Frame f;
  double y_max = 0.0;
  for (const auto& b : bars) y_max = std::max(y_max, b.value + b.error);
  if (!(y_max > 0.0)) y_max = 1.0;
  y_max *= 1.1;
  std::ostringstream os;
  detail::open_svg(os, f, title, y_label);
  detail::y_axis(os, f, y_max);
  const double slot = bars.empty() ? f.plot_w() : f.plot_w() / static_cast<double>(bars.size());
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& b = bars[i];
    const double x = f.left + slot * (static_cast<double>(i) + 0.15);
    const double w = slot * 0.7;
    const double h = f.plot_h() * b.value / y_max;
    const double y = f.top + f.plot_h() - h;
    os << "<rect x=\"" << detail::num(x) << "\" y=\"" << detail::num(y) << "\" width=\"" << detail::num(w)
       << "\" height=\"" << detail::num(h) << "\" fill=\"" << detail::kPalette[i % 8] << "\"/>\n";
    if (b.error > 0.0) {
      const double cx = x + w / 2;
      const double y_lo = f.top + f.plot_h() * (1.0 - (b.value - b.error) / y_max);
      const double y_hi = f.top + f.plot_h() * (1.0 - (b.value + b.error) / y_max);
      os << "<line x1=\"" << detail::num(cx) << "\" y1=\"" << detail::num(y_lo) << "\" x2=\"" << detail::num(cx)
         << "\" y2=\"" << detail::num(y_hi) << "\" stroke=\"black\"/>\n";
    }
    const double lx = x + w / 2;
    const double ly = f.top + f.plot_h() + 10;
    os << "<text transform=\"translate(" << detail::num(lx) << "," << detail::num(ly)
       << ") rotate(40)\" text-anchor=\"start\">" << detail::svg_escape(b.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

[[nodiscard]] inline std::string line_chart_svg(const std::vector<Series>& series, const std::string& title,
                                                const std::string& x_label, const std::string& y_label,
                                                bool log_x) {
  detail::Frame f;
  f.bottom = 60;
  auto tx = [log_x](double x) { return log_x ? std::log2(x) : x; };
  double x_min = INFINITY, x_max = -INFINITY, y_max = 0.0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, tx(x));
      x_max = std::max(x_max, tx(x));
      y_max = std::max(y_max, y);
    }
  }
  if (!(x_max > x_min)) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (!(y_max > 0.0)) y_max = 1.0;
  y_max *= 1.1;
  std::ostringstream os;
  detail::open_svg(os, f, title, y_label);
  detail::y_axis(os, f, y_max);
  auto px = [&](double x) { return f.left + f.plot_w() * (tx(x) - x_min) / (x_max - x_min); };
  auto py = [&](double y) { return f.top + f.plot_h() * (1.0 - y / y_max); };
  os << "<text x=\"" << f.left + f.plot_w() / 2 << "\" y=\"" << f.height - 12 << "\" text-anchor=\"middle\">"
     << detail::svg_escape(x_label) << (log_x ? " (log scale)" : "") << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = detail::kPalette[si % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : s.points) os << detail::num(px(x)) << ',' << detail::num(py(y)) << ' ';
    os << "\"/>\n";
    for (const auto& [x, y] : s.points) {
      os << "<circle cx=\"" << detail::num(px(x)) << "\" cy=\"" << detail::num(py(y)) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
      if (si == 0) {
        os << "<text x=\"" << detail::num(px(x)) << "\" y=\"" << detail::num(f.top + f.plot_h() + 16)
           << "\" text-anchor=\"middle\">" << detail::tick(x) << "</text>\n";
      }
    }
    os << "<text x=\"" << f.left + f.plot_w() - 150 << "\" y=\"" << f.top + 14 * (si + 1) << "\" fill=\"" << color
       << "\">" << detail::svg_escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Reads a table written by write_aggregate_csv.
[[nodiscard]] inline std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
  std::vector<AggregateRow> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    const auto fields = detail::split_fields(line);
    if (fields.size() != 8) throw DataError("aggregate row " + std::to_string(out.size()) + ": expected 8 fields");
    AggregateRow a;
    a.dataset = fields[0];
    a.objective = fields[1];
    a.setting = fields[2];
    if (!fields[3].empty()) a.m = detail::parse_cell(fields[3], out.size(), "m");
    a.split = fields[4];
    a.n = static_cast<std::size_t>(detail::parse_cell(fields[5], out.size(), "n"));
    a.mean = detail::parse_cell(fields[6], out.size(), "mean_mae");
    a.ste = detail::parse_cell(fields[7], out.size(), "ste_mae");
    out.push_back(std::move(a));
  }
  if (out.empty()) throw DataError("empty dataset");
  return out;
}

/// Test-split MAE: one line per objective against m when every row carries an
/// m, otherwise one bar per (objective, setting, m) with standard-error bars.
[[nodiscard]] inline std::string plot_aggregate(const std::vector<AggregateRow>& rows, const std::string& split = "test") {
  std::vector<AggregateRow> picked;
  for (const auto& r : rows) {
    if (r.split == split) picked.push_back(r);
  }
  if (picked.empty()) throw DataError("no aggregate rows for split '" + split + "'");
  const bool all_m = std::all_of(picked.begin(), picked.end(), [](const AggregateRow& r) { return r.m.has_value(); });
  const std::string title = picked.front().dataset + " (" + split + ")";
  if (all_m) {
    std::map<std::string, Series> by_objective;
    for (const auto& r : picked) {
      auto& s = by_objective[r.objective + " " + r.setting];
      s.name = r.objective;
      s.points.emplace_back(*r.m, r.mean);
    }
    std::vector<Series> series;
    for (auto& [_, s] : by_objective) {
      std::sort(s.points.begin(), s.points.end());
      series.push_back(std::move(s));
    }
    return line_chart_svg(series, title, "Lipschitz constant m", "mean MAE", true);
  }
  std::vector<Bar> bars;
  for (const auto& r : picked) {
    std::string label = r.objective + " " + r.setting;
    if (r.m) label += " m=" + detail::tick(*r.m);
    bars.push_back({label, r.mean, r.ste});
  }
  return bar_chart_svg(bars, title, "mean MAE");
}

/// Reads ensemble_widths.csv and plots width against m, or one bar per
/// objective when the runs were unconstrained.
[[nodiscard]] inline std::string plot_ensemble_widths(std::istream& in) {
  std::map<std::string, Series> by_objective;
  std::vector<Bar> unconstrained;
  std::string line;
  bool header = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    const auto fields = detail::split_fields(line);
    if (fields.size() != 4) throw DataError("ensemble row " + std::to_string(row) + ": expected 4 fields");
    if (fields[1].empty()) {
      unconstrained.push_back({fields[0], detail::parse_cell(fields[3], row++, "mean_width"), 0.0});
      continue;
    }
    auto& s = by_objective[std::string(fields[0])];
    s.name = fields[0];
    s.points.emplace_back(detail::parse_cell(fields[1], row, "m"), detail::parse_cell(fields[3], row, "mean_width"));
    ++row;
  }
  if (by_objective.empty()) {
    if (unconstrained.empty()) throw DataError("empty dataset");
    return bar_chart_svg(unconstrained, "ensemble interval width", "mean width");
  }
  std::vector<Series> series;
  for (auto& [_, s] : by_objective) {
    std::sort(s.points.begin(), s.points.end());
    series.push_back(std::move(s));
  }
  return line_chart_svg(series, "ensemble interval width", "Lipschitz constant m", "mean width", true);
}

}  // namespace intervalreg::harness
