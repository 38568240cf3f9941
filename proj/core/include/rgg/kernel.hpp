#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "rgg/errors.hpp"

namespace rgg {

// Natural cubic spline through (x_i, y_i) with strictly increasing x.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double t) const;

 private:
  std::vector<double> x_, y_, m_;  // m_ = second derivatives
};

// Kernel g on [0,1]; h(t) = 1_{[0,1]}(t) g(t) is what enters the affinity.
// g_star extends g to [0,inf) for the sigmoid-smoothed matrix.
class KernelSpec {
 public:
  enum class Kind { ConstantOne, Exponential, Tabulated };

  static KernelSpec constant_one();
  // g(t) = exp(-c t^2), c >= 0
  static KernelSpec exponential(double c);
  // cubic-spline interpolant of samples on [0,1]; boundedness (0 < inf <= sup
  // < inf) is checked on a 1024-point grid
  static KernelSpec tabulated(std::vector<double> ts, std::vector<double> values);

  Kind kind() const { return kind_; }
  double param() const { return c_; }

  // g(t) for t in [0,1]
  double g(double t) const;
  // extension to [0,inf): the exponential is its own extension; constant and
  // tabulated kernels are extended by their boundary value
  double g_star(double t) const;
  double sup_g_star() const { return sup_; }

  // cache/serialization key
  std::string key() const;

 private:
  KernelSpec() = default;
  Kind kind_ = Kind::ConstantOne;
  double c_ = 0.0;
  std::shared_ptr<const CubicSpline> spline_;
  double sup_ = 1.0;
  double boundary_ = 1.0;  // g(1), used for the tabulated extension
  std::string key_;
};

// h(t) = 1_{[0,1]}(t) g(t)
inline double eval_h(double t, const KernelSpec& g) {
  if (t < 0.0) throw InvalidArgument("eval_h: t must be >= 0");
  return t <= 1.0 ? g.g(t) : 0.0;
}

}  // namespace rgg
