#pragma once

#include <string>
#include <vector>

namespace rgg {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained SVG violin chart: one kernel-density silhouette per group,
// optional theory markers. Byte-deterministic for identical input.
std::string emit_svg_violin(const std::vector<std::vector<double>>& groups,
                            const std::vector<double>& markers,
                            const std::string& xlabel, const std::string& ylabel);

// Self-contained SVG line chart, one polyline per series.
std::string emit_svg_line(const std::vector<SvgSeries>& series,
                          const std::string& xlabel, const std::string& ylabel,
                          bool log_x = false, bool log_y = false);

}  // namespace rgg
