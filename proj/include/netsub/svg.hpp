#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace netsub {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgChartOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_x = true;
  int width = 720;
  int height = 440;
  /// Horizontal reference line (e.g. 1 for scaled-gap plots); NaN for none.
  double reference_y = std::numeric_limits<double>::quiet_NaN();
};

/// Polyline chart, one path per series; points with x <= 0 are skipped on a log axis.
std::string render_svg_chart(const std::vector<SvgSeries>& series, const SvgChartOptions& opts);
void write_svg_chart(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                     const SvgChartOptions& opts);

}  // namespace netsub
