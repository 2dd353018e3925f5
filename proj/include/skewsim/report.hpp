#pragma once

// Report emission: CSV tables with fixed 17-significant-digit formatting and
// a small deterministic SVG plotter (fixed 960x600 viewport, no timestamps),
// so reruns produce byte-identical artifacts.

#include <string>
#include <utility>
#include <vector>

namespace skewsim {

// Shortest round-trip decimal representation ("%.17g").
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string to_string() const;
  void write(const std::string& path) const;
};

enum class PlotKind { Scatter, Line, Bars };

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

std::string render_svg(const std::vector<PlotSeries>& series, PlotKind kind,
                       const std::string& x_label, const std::string& y_label,
                       const std::string& title);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace skewsim
