#include "rgg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rgg/errors.hpp"

namespace rgg {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginL = 70, kMarginR = 20, kMarginT = 20, kMarginB = 55;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Scale {
  double lo, hi;
  double px0, px1;
  bool log = false;
  double at(double v) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) /
                               (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return px0 + t * (px1 - px0);
  }
};

void axes(std::ostringstream& os, const Scale& sx, const Scale& sy,
          const std::string& xlabel, const std::string& ylabel) {
  os << "<rect x='" << kMarginL << "' y='" << kMarginT << "' width='"
     << (kWidth - kMarginL - kMarginR) << "' height='"
     << (kHeight - kMarginT - kMarginB)
     << "' fill='none' stroke='#333' stroke-width='1'/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double tx = sx.log ? std::pow(10.0, std::log10(sx.lo) +
                                                  i * (std::log10(sx.hi) -
                                                       std::log10(sx.lo)) / 5.0)
                             : sx.lo + i * (sx.hi - sx.lo) / 5.0;
    const double ty = sy.log ? std::pow(10.0, std::log10(sy.lo) +
                                                  i * (std::log10(sy.hi) -
                                                       std::log10(sy.lo)) / 5.0)
                             : sy.lo + i * (sy.hi - sy.lo) / 5.0;
    os << "<text x='" << fmt(sx.at(tx)) << "' y='" << (kHeight - kMarginB + 18)
       << "' font-size='11' text-anchor='middle' fill='#333'>" << fmt(tx)
       << "</text>\n";
    os << "<text x='" << (kMarginL - 8) << "' y='" << fmt(sy.at(ty) + 4)
       << "' font-size='11' text-anchor='end' fill='#333'>" << fmt(ty)
       << "</text>\n";
  }
  os << "<text x='" << (kWidth / 2) << "' y='" << (kHeight - 12)
     << "' font-size='13' text-anchor='middle' fill='#000'>" << xlabel
     << "</text>\n";
  os << "<text x='16' y='" << (kHeight / 2)
     << "' font-size='13' text-anchor='middle' fill='#000' transform='rotate(-90 16 "
     << (kHeight / 2) << ")'>" << ylabel << "</text>\n";
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string emit_svg_violin(const std::vector<std::vector<double>>& groups,
                            const std::vector<double>& markers,
                            const std::string& xlabel, const std::string& ylabel) {
  if (groups.empty()) throw InvalidArgument("emit_svg_violin: empty table");
  for (const auto& g : groups)
    if (g.empty()) throw InvalidArgument("emit_svg_violin: empty group");

  double lo = 1e300, hi = -1e300;
  for (const auto& g : groups)
    for (double v : g) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  for (double v : markers) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= lo) hi = lo + 1.0;
  const double pad = 0.08 * (hi - lo);
  Scale sy{lo - pad, hi + pad, static_cast<double>(kHeight - kMarginB),
           static_cast<double>(kMarginT)};
  Scale sx{0.0, static_cast<double>(groups.size() + 1),
           static_cast<double>(kMarginL), static_cast<double>(kWidth - kMarginR)};

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
     << kHeight << "' viewBox='0 0 " << kWidth << ' ' << kHeight << "'>\n";
  axes(os, sx, sy, xlabel, ylabel);

  const int bins = 48;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<double> vals = groups[g];
    std::sort(vals.begin(), vals.end());
    const double n = static_cast<double>(vals.size());
    double mean = 0.0, var = 0.0;
    for (double v : vals) mean += v;
    mean /= n;
    for (double v : vals) var += (v - mean) * (v - mean);
    var = n > 1 ? var / (n - 1) : 0.0;
    double bw = 1.06 * std::sqrt(var) * std::pow(n, -0.2);  // Silverman
    const double span = vals.back() - vals.front();
    if (!(bw > 0.0)) bw = span > 0.0 ? span / 10.0 : 1e-3;

    const double vlo = vals.front() - 2.0 * bw, vhi = vals.back() + 2.0 * bw;
    std::vector<double> dens(bins, 0.0);
    double dmax = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double y = vlo + (vhi - vlo) * b / (bins - 1);
      double acc = 0.0;
      for (double v : vals) {
        const double u = (y - v) / bw;
        acc += std::exp(-0.5 * u * u);
      }
      dens[b] = acc;
      dmax = std::max(dmax, acc);
    }
    const double cx = sx.at(static_cast<double>(g + 1));
    const double halfw = 0.35 * (sx.at(1.0) - sx.at(0.0));
    os << "<path d='";
    for (int b = 0; b < bins; ++b) {
      const double y = vlo + (vhi - vlo) * b / (bins - 1);
      const double w = dmax > 0.0 ? halfw * dens[b] / dmax : 0.0;
      os << (b == 0 ? 'M' : 'L') << fmt(cx - w) << ' ' << fmt(sy.at(y));
    }
    for (int b = bins - 1; b >= 0; --b) {
      const double y = vlo + (vhi - vlo) * b / (bins - 1);
      const double w = dmax > 0.0 ? halfw * dens[b] / dmax : 0.0;
      os << 'L' << fmt(cx + w) << ' ' << fmt(sy.at(y));
    }
    os << "Z' fill='" << kColors[g % 8] << "' fill-opacity='0.45' stroke='"
       << kColors[g % 8] << "' stroke-width='1'/>\n";
    os << "<text x='" << fmt(cx) << "' y='" << (kHeight - kMarginB + 32)
       << "' font-size='11' text-anchor='middle' fill='#333'>k=" << (g + 1)
       << "</text>\n";
    if (g < markers.size())
      os << "<circle cx='" << fmt(cx) << "' cy='" << fmt(sy.at(markers[g]))
         << "' r='4' fill='#00c' stroke='#fff' stroke-width='1'/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string emit_svg_line(const std::vector<SvgSeries>& series,
                          const std::string& xlabel, const std::string& ylabel,
                          bool log_x, bool log_y) {
  if (series.empty()) throw InvalidArgument("emit_svg_line: empty table");
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size())
      throw InvalidArgument("emit_svg_line: bad series");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (log_x && !(xlo > 0.0)) throw InvalidArgument("emit_svg_line: log x needs x > 0");
  if (log_y && !(ylo > 0.0)) throw InvalidArgument("emit_svg_line: log y needs y > 0");
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (yhi <= ylo) yhi = ylo + 1.0;
  if (!log_y) {
    const double pad = 0.08 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
  }

  Scale sx{xlo, xhi, static_cast<double>(kMarginL),
           static_cast<double>(kWidth - kMarginR), log_x};
  Scale sy{ylo, yhi, static_cast<double>(kHeight - kMarginB),
           static_cast<double>(kMarginT), log_y};

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
     << kHeight << "' viewBox='0 0 " << kWidth << ' ' << kHeight << "'>\n";
  axes(os, sx, sy, xlabel, ylabel);
  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<polyline fill='none' stroke='" << kColors[s % 8]
       << "' stroke-width='1.8' points='";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      os << fmt(sx.at(series[s].x[i])) << ',' << fmt(sy.at(series[s].y[i])) << ' ';
    os << "'/>\n";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      os << "<circle cx='" << fmt(sx.at(series[s].x[i])) << "' cy='"
         << fmt(sy.at(series[s].y[i])) << "' r='3' fill='" << kColors[s % 8]
         << "'/>\n";
    os << "<text x='" << (kMarginL + 10) << "' y='" << (kMarginT + 16 + 16 * s)
       << "' font-size='12' fill='" << kColors[s % 8] << "'>" << series[s].label
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rgg
