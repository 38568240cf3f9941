#include "rgg/sampling.hpp"

#include "rgg/rng.hpp"

namespace rgg {

PointCloud sample_gaussian(int n, const SigmaDiag& sigma, std::uint64_t seed,
                           std::uint64_t stream) {
  if (n < 2) throw InvalidArgument("sample_gaussian: need n >= 2");
  const int d = sigma.dim();
  CounterRng rng(seed, stream);
  PointCloud cloud;
  cloud.points.resize(n, d);
  for (int j = 0; j < n; ++j) {
    const std::uint64_t base = static_cast<std::uint64_t>(j) * 2 * d;
    for (int i = 0; i < d; ++i)
      cloud.points(j, i) = sigma.sigma(i) * rng.normal(base + 2 * i);
  }
  cloud.meta = {seed, stream, "gaussian"};
  return cloud;
}

PointCloud sample_signal_plus_noise(int n, const SignalModel& model, std::uint64_t seed,
                                    std::uint64_t stream) {
  if (n < 2) throw InvalidArgument("sample_signal_plus_noise: need n >= 2");
  if (!(model.noise_sigma >= 0.0))
    throw InvalidArgument("SignalModel: noise_sigma must be >= 0");
  if (model.kind == SignalModel::Kind::Custom && !model.custom)
    throw InvalidArgument("SignalModel: custom embedding not set");
  // z draws and noise draws use disjoint counter ranges so that toggling the
  // noise or the z mode never perturbs the other component
  CounterRng zrng(seed, stream * 2 + 1);
  CounterRng erng(seed, stream * 2 + 2);
  PointCloud cloud;
  cloud.points.resize(n, 1);
  for (int j = 0; j < n; ++j) {
    const double z = model.grid_z ? (j + 0.5) / n : zrng.uniform(j);
    double y = model.iota(z);
    if (model.noise_sigma > 0.0)
      y += model.noise_sigma * erng.normal(2 * static_cast<std::uint64_t>(j));
    cloud.points(j, 0) = y;
  }
  cloud.meta = {seed, stream, model.name()};
  return cloud;
}

double bulk_halfwidth(const SigmaDiag& sigma, int axis, int n, BulkVariant variant,
                      double beta) {
  if (n < 3) throw InvalidArgument("bulk region: need n >= 3");
  const double d = sigma.dim();
  const double logn = std::log(static_cast<double>(n));
  const double factor = variant == BulkVariant::Bn
                            ? std::sqrt(logn / (d * d / 4.0 + d + 1.0))
                            : std::sqrt(2.0 * (1.0 + beta) * logn);
  return sigma.sigma(axis) * factor;
}

bool bulk_membership(std::span<const double> x, const SigmaDiag& sigma, int n,
                     BulkVariant variant, double beta) {
  if (static_cast<int>(x.size()) != sigma.dim())
    throw InvalidArgument("bulk_membership: dimension mismatch");
  for (int i = 0; i < sigma.dim(); ++i)
    if (std::abs(x[i]) > bulk_halfwidth(sigma, i, n, variant, beta)) return false;
  return true;
}

}  // namespace rgg
