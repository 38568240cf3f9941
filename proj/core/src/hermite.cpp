#include "rgg/hermite.hpp"

#include <cmath>

namespace rgg {

double hermite_eval(int m, double x) {
  if (m < 0) throw InvalidArgument("hermite_eval: need m >= 0");
  if (m == 0) return 1.0;
  double hm1 = 1.0;        // H_0
  double hm = 2.0 * x;     // H_1
  for (int j = 1; j < m; ++j) {
    const double next = 2.0 * x * hm - 2.0 * j * hm1;
    hm1 = hm;
    hm = next;
  }
  return hm;
}

EigenFunction::EigenFunction(HermiteIndex idx, SigmaDiag s)
    : index(std::move(idx)), sigma(std::move(s)) {
  if (index.dim() != sigma.dim())
    throw InvalidArgument("EigenFunction: index/sigma dimension mismatch");
  double log_c = 0.0;
  for (int i = 0; i < sigma.dim(); ++i) {
    const int m = index.k[i];
    log_c += -0.5 * (0.5 * std::log(M_PI) + std::lgamma(m + 1.0) +
                     m * std::log(2.0) + std::log(sigma.sigma(i)));
  }
  norm_const_ = std::exp(log_c);
}

double EigenFunction::eigenvalue() const {
  double s = 0.0;
  for (int i = 0; i < sigma.dim(); ++i) s += 2.0 * index.k[i] / sigma.sigma_sq[i];
  return s;
}

double EigenFunction::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != sigma.dim())
    throw InvalidArgument("EigenFunction: dimension mismatch");
  double v = norm_const_;
  for (int i = 0; i < sigma.dim(); ++i)
    v *= hermite_eval(index.k[i], x[i] / sigma.sigma(i));
  return v;
}

HermitePoly HermitePoly::constant(const SigmaDiag& sigma, double value) {
  std::map<HermiteIndex, double> c;
  c.emplace(HermiteIndex(std::vector<int>(sigma.dim(), 0)), value);
  return HermitePoly(sigma, std::move(c));
}

HermitePoly HermitePoly::coordinate(const SigmaDiag& sigma, int axis) {
  // x = sigma * H_1(x/sigma) / 2
  std::vector<int> k(sigma.dim(), 0);
  k[axis] = 1;
  std::map<HermiteIndex, double> c;
  c.emplace(HermiteIndex(std::move(k)), sigma.sigma(axis) / 2.0);
  return HermitePoly(sigma, std::move(c));
}

HermitePoly HermitePoly::from_eigenfunction(const EigenFunction& phi) {
  std::map<HermiteIndex, double> c;
  c.emplace(phi.index, phi.normalization());
  return HermitePoly(phi.sigma, std::move(c));
}

double HermitePoly::operator()(std::span<const double> x) const {
  double acc = 0.0;
  for (const auto& [idx, coef] : coeffs_) {
    double term = coef;
    for (int i = 0; i < sigma_.dim(); ++i)
      term *= hermite_eval(idx.k[i], x[i] / sigma_.sigma(i));
    acc += term;
  }
  return acc;
}

HermitePoly HermitePoly::derivative(int axis) const {
  // d/dx H_m(x/sigma) = (2m/sigma) H_{m-1}(x/sigma)
  std::map<HermiteIndex, double> out;
  for (const auto& [idx, coef] : coeffs_) {
    const int m = idx.k[axis];
    if (m == 0) continue;
    HermiteIndex shifted = idx;
    shifted.k[axis] = m - 1;
    out[shifted] += coef * 2.0 * m / sigma_.sigma(axis);
  }
  return HermitePoly(sigma_, std::move(out));
}

HermitePoly HermitePoly::times_coordinate(int axis) const {
  // x H_m(x/sigma) = sigma (H_{m+1}(x/sigma) + 2m H_{m-1}(x/sigma)) / 2
  std::map<HermiteIndex, double> out;
  const double s = sigma_.sigma(axis);
  for (const auto& [idx, coef] : coeffs_) {
    const int m = idx.k[axis];
    HermiteIndex up = idx;
    up.k[axis] = m + 1;
    out[up] += coef * s / 2.0;
    if (m > 0) {
      HermiteIndex down = idx;
      down.k[axis] = m - 1;
      out[down] += coef * s * m;
    }
  }
  return HermitePoly(sigma_, std::move(out));
}

HermitePoly HermitePoly::laplace_beltrami() const {
  std::map<HermiteIndex, double> out;
  auto add = [&out](const HermitePoly& p, double factor) {
    for (const auto& [idx, coef] : p.coeffs_) {
      out[idx] += factor * coef;
      if (out[idx] == 0.0) out.erase(idx);
    }
  };
  for (int i = 0; i < sigma_.dim(); ++i) {
    const HermitePoly di = derivative(i);
    add(di.derivative(i), -1.0);
    add(di.times_coordinate(i), 2.0 / sigma_.sigma_sq[i]);
  }
  return HermitePoly(sigma_, std::move(out));
}

double apply_laplace_beltrami(const HermitePoly& f, std::span<const double> x) {
  return f.laplace_beltrami()(x);
}

}  // namespace rgg
