#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "rgg/errors.hpp"

namespace rgg {

// Order of an lp metric, p in [1, infinity]. Infinity is a distinguished
// state, never a large float stand-in.
class MetricOrder {
 public:
  static MetricOrder lp(double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw InvalidArgument("MetricOrder: need finite p >= 1");
    return MetricOrder(p, false);
  }
  static MetricOrder linf() { return MetricOrder(0.0, true); }

  bool is_inf() const { return inf_; }
  // only valid when !is_inf()
  double p() const { return p_; }

  bool operator==(const MetricOrder& o) const {
    return inf_ == o.inf_ && (inf_ || p_ == o.p_);
  }

 private:
  MetricOrder(double p, bool inf) : p_(p), inf_(inf) {}
  double p_;
  bool inf_;
};

inline double lp_norm(std::span<const double> v, const MetricOrder& p) {
  if (p.is_inf()) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
  }
  const double pp = p.p();
  if (pp == 2.0) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
  }
  if (pp == 1.0) {
    double s = 0.0;
    for (double c : v) s += std::abs(c);
    return s;
  }
  double s = 0.0;
  for (double c : v) s += std::pow(std::abs(c), pp);
  return std::pow(s, 1.0 / pp);
}

inline double lp_distance(std::span<const double> x, std::span<const double> y,
                          const MetricOrder& p) {
  if (x.size() != y.size()) throw InvalidArgument("lp_distance: dimension mismatch");
  const std::size_t d = x.size();
  if (p.is_inf()) {
    double m = 0.0;
    for (std::size_t i = 0; i < d; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
  }
  const double pp = p.p();
  if (pp == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double c = x[i] - y[i];
      s += c * c;
    }
    return std::sqrt(s);
  }
  if (pp == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += std::abs(x[i] - y[i]);
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += std::pow(std::abs(x[i] - y[i]), pp);
  return std::pow(s, 1.0 / pp);
}

}  // namespace rgg
