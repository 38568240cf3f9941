#include "rgg/kernel.hpp"

#include <algorithm>
#include <cstdio>

namespace rgg {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw InvalidArgument("CubicSpline: need >= 2 matching samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw InvalidArgument("CubicSpline: x not increasing");
  // tridiagonal solve for natural spline second derivatives
  m_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    a[i] = h0 / 6.0;
    b[i] = (h0 + h1) / 3.0;
    c[i] = h1 / 6.0;
    r[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  // Thomas algorithm on the interior unknowns
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double t) const {
  const std::size_t n = x_.size();
  t = std::clamp(t, x_.front(), x_.back());
  std::size_t hi = std::upper_bound(x_.begin(), x_.end(), t) - x_.begin();
  hi = std::clamp<std::size_t>(hi, 1, n - 1);
  const std::size_t lo = hi - 1;
  const double h = x_[hi] - x_[lo];
  const double A = (x_[hi] - t) / h, B = (t - x_[lo]) / h;
  return A * y_[lo] + B * y_[hi] +
         ((A * A * A - A) * m_[lo] + (B * B * B - B) * m_[hi]) * h * h / 6.0;
}

KernelSpec KernelSpec::constant_one() {
  KernelSpec k;
  k.kind_ = Kind::ConstantOne;
  k.sup_ = 1.0;
  k.boundary_ = 1.0;
  k.key_ = "const";
  return k;
}

KernelSpec KernelSpec::exponential(double c) {
  if (!(c >= 0.0)) throw InvalidArgument("KernelSpec::exponential: need c >= 0");
  KernelSpec k;
  k.kind_ = Kind::Exponential;
  k.c_ = c;
  k.sup_ = 1.0;  // exp(-c t^2) peaks at t = 0
  k.boundary_ = std::exp(-c);
  char buf[48];
  std::snprintf(buf, sizeof buf, "exp:%.17g", c);
  k.key_ = buf;
  return k;
}

KernelSpec KernelSpec::tabulated(std::vector<double> ts, std::vector<double> values) {
  KernelSpec k;
  k.kind_ = Kind::Tabulated;
  k.spline_ = std::make_shared<CubicSpline>(std::move(ts), std::move(values));
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 1024; ++i) {
    const double v = (*k.spline_)(i / 1023.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo > 0.0) || !std::isfinite(hi))
    throw InvalidArgument("KernelSpec::tabulated: kernel must be bounded away from 0");
  k.sup_ = hi;
  k.boundary_ = (*k.spline_)(1.0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "tab:%p", static_cast<const void*>(k.spline_.get()));
  k.key_ = buf;
  return k;
}

double KernelSpec::g(double t) const {
  switch (kind_) {
    case Kind::ConstantOne: return 1.0;
    case Kind::Exponential: return std::exp(-c_ * t * t);
    case Kind::Tabulated: return (*spline_)(t);
  }
  return 1.0;
}

double KernelSpec::g_star(double t) const {
  if (t < 0.0) throw InvalidArgument("g_star: t must be >= 0");
  switch (kind_) {
    case Kind::ConstantOne: return 1.0;
    case Kind::Exponential: return std::exp(-c_ * t * t);
    case Kind::Tabulated: return t <= 1.0 ? (*spline_)(t) : boundary_;
  }
  return 1.0;
}

std::string KernelSpec::key() const { return key_; }

}  // namespace rgg
