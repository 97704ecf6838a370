#pragma once

// Minimal static SVG line charts (no scripts).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sigspace::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  int width = 800;
  int height = 600;
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  /// Fixed y-range; otherwise fitted to the data.
  std::optional<double> y_min;
  std::optional<double> y_max;
};

std::string line_chart(const std::vector<Series>& series, const ChartOptions& opt);

void write_svg(const std::filesystem::path& path, const std::string& svg);

std::string xml_escape(const std::string& s);

}  // namespace sigspace::plot
