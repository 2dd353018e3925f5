#include "skewsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skewsim {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("csv row width mismatch");
  rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

void CsvTable::write(const std::string& path) const {
  write_text_file(path, to_string());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

constexpr double kWidth = 960.0, kHeight = 600.0;
constexpr double kLeft = 70.0, kRight = 920.0, kTop = 50.0, kBottom = 550.0;

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* series_color(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#ff7f0e", "#9467bd", "#8c564b"};
  return colors[i % 6];
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, PlotKind kind,
                       const std::string& x_label, const std::string& y_label,
                       const std::string& title) {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  if (kind == PlotKind::Bars) ymin = std::min(ymin, 0.0);
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double xpad = 0.02 * (xmax - xmin);
  const double ypad = 0.02 * (ymax - ymin);
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  const auto px = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft);
  };
  const auto py = [&](double y) {
    return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" "
         "height=\"600\" viewBox=\"0 0 960 600\">\n";
  svg << "<rect width=\"960\" height=\"600\" fill=\"white\"/>\n";
  svg << "<text x=\"480\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"monospace\" font-size=\"16\">" << title << "</text>\n";
  svg << "<line x1=\"" << fmt_coord(kLeft) << "\" y1=\"" << fmt_coord(kBottom)
      << "\" x2=\"" << fmt_coord(kRight) << "\" y2=\"" << fmt_coord(kBottom)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << fmt_coord(kLeft) << "\" y1=\"" << fmt_coord(kTop)
      << "\" x2=\"" << fmt_coord(kLeft) << "\" y2=\"" << fmt_coord(kBottom)
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + t * (xmax - xmin) / 4.0;
    const double fy = ymin + t * (ymax - ymin) / 4.0;
    svg << "<text x=\"" << fmt_coord(px(fx)) << "\" y=\"" << fmt_coord(kBottom + 20)
        << "\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"11\">" << fmt_tick(fx) << "</text>\n";
    svg << "<text x=\"" << fmt_coord(kLeft - 8) << "\" y=\""
        << fmt_coord(py(fy) + 4)
        << "\" text-anchor=\"end\" font-family=\"monospace\" "
           "font-size=\"11\">" << fmt_tick(fy) << "</text>\n";
  }
  svg << "<text x=\"495\" y=\"585\" text-anchor=\"middle\" "
         "font-family=\"monospace\" font-size=\"13\">" << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"300\" text-anchor=\"middle\" "
         "font-family=\"monospace\" font-size=\"13\" "
         "transform=\"rotate(-90 18 300)\">" << y_label << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = series_color(si);
    if (kind == PlotKind::Bars) {
      double bw = 8.0;
      if (s.points.size() > 1)
        bw = std::max(1.0, 0.9 * (kRight - kLeft) / s.points.size());
      for (const auto& [x, y] : s.points) {
        const double top = std::min(py(y), py(0.0));
        const double h = std::fabs(py(y) - py(0.0));
        svg << "<rect x=\"" << fmt_coord(px(x) - bw / 2) << "\" y=\""
            << fmt_coord(top) << "\" width=\"" << fmt_coord(bw)
            << "\" height=\"" << fmt_coord(h) << "\" fill=\"" << color
            << "\" fill-opacity=\"0.8\"/>\n";
      }
    } else if (kind == PlotKind::Line) {
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : s.points)
        svg << fmt_coord(px(x)) << "," << fmt_coord(py(y)) << " ";
      svg << "\"/>\n";
      for (const auto& [x, y] : s.points)
        svg << "<circle cx=\"" << fmt_coord(px(x)) << "\" cy=\""
            << fmt_coord(py(y)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    } else {
      for (const auto& [x, y] : s.points)
        svg << "<circle cx=\"" << fmt_coord(px(x)) << "\" cy=\""
            << fmt_coord(py(y)) << "\" r=\"2\" fill=\"" << color
            << "\" fill-opacity=\"0.7\"/>\n";
    }
    if (!s.label.empty()) {
      const double ly = kTop + 16.0 * (si + 1);
      svg << "<rect x=\"" << fmt_coord(kRight - 160) << "\" y=\""
          << fmt_coord(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
          << color << "\"/>\n";
      svg << "<text x=\"" << fmt_coord(kRight - 144) << "\" y=\""
          << fmt_coord(ly) << "\" font-family=\"monospace\" "
             "font-size=\"12\">" << s.label << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace skewsim
