#include "rgg/moments.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "rgg/quadrature.hpp"

namespace rgg {

double unit_ball_moment(int d, const MetricOrder& p, int l) {
  if (d < 1) throw InvalidArgument("unit_ball_moment: need d >= 1");
  if (l < 0) throw InvalidArgument("unit_ball_moment: need l >= 0");
  if (p.is_inf()) {
    // cube [-1,1]^d: (2/(l+1)) * 2^(d-1)
    return std::pow(2.0, d) / (l + 1.0);
  }
  const double pp = p.p();
  // Dirichlet integral over the lp ball:
  //   int |u_1|^l du = 2^d p^-d Gamma((l+1)/p) Gamma(1/p)^(d-1) / Gamma(1+(d+l)/p)
  const double log_val = d * std::log(2.0) - d * std::log(pp) +
                         std::lgamma((l + 1.0) / pp) +
                         (d - 1.0) * std::lgamma(1.0 / pp) -
                         std::lgamma(1.0 + (d + l) / pp);
  return std::exp(log_val);
}

double moment(int d, const MetricOrder& p, const KernelSpec& g, int l,
              double* est_error) {
  const double angular = (d + l) * unit_ball_moment(d, p, l);
  if (g.kind() == KernelSpec::Kind::ConstantOne) {
    if (est_error) *est_error = 0.0;
    return unit_ball_moment(d, p, l);
  }
  const QuadResult radial = integrate_1d_adaptive(
      [&](double r) { return g.g(r) * std::pow(r, d + l - 1); }, 0.0, 1.0, 1e-12,
      1e-300, 32);
  if (est_error) *est_error = angular * radial.est_error;
  return angular * radial.value;
}

namespace {
std::string moment_key(int d, const MetricOrder& p, const KernelSpec& g) {
  std::ostringstream os;
  os << d << '|' << (p.is_inf() ? std::string("inf") : std::to_string(p.p())) << '|'
     << g.key();
  return os.str();
}
}  // namespace

MomentPair compute_moments(int d, const MetricOrder& p, const KernelSpec& g) {
  if (d < 1) throw InvalidArgument("compute_moments: need d >= 1");
  static std::map<std::string, MomentPair> cache;
  static std::mutex mu;
  const std::string key = moment_key(d, p, g);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  MomentPair out;
  const bool analytic = g.kind() == KernelSpec::Kind::ConstantOne &&
                        (p.is_inf() || p.p() == 1.0 || p.p() == 2.0);
  double e0 = 0.0, e2 = 0.0;
  out.m0 = moment(d, p, g, 0, &e0);
  out.m2 = moment(d, p, g, 2, &e2);
  out.method = analytic ? "analytic" : "quadrature";
  out.est_error = std::max(e0, e2);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, out);
  return out;
}

}  // namespace rgg
