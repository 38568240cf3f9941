#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rgg/errors.hpp"

namespace rgg {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Diagonal covariance diag(sigma_1^2, ..., sigma_d^2).
struct SigmaDiag {
  std::vector<double> sigma_sq;

  explicit SigmaDiag(std::vector<double> variances) : sigma_sq(std::move(variances)) {
    if (sigma_sq.empty()) throw InvalidArgument("SigmaDiag: need d >= 1");
    for (double v : sigma_sq)
      if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidArgument("SigmaDiag: variances must be positive and finite");
  }
  static SigmaDiag isotropic(int d, double variance) {
    return SigmaDiag(std::vector<double>(d, variance));
  }

  int dim() const { return static_cast<int>(sigma_sq.size()); }
  double sigma(int i) const { return std::sqrt(sigma_sq[i]); }
  double min_inv_variance() const {
    double m = 1.0 / sigma_sq[0];
    for (double v : sigma_sq) m = std::min(m, 1.0 / v);
    return m;
  }
};

// 1-D clean-signal embedding iota: [0,1] -> R, optionally corrupted by
// N(0, sigma^2) noise.
struct SignalModel {
  enum class Kind { Identity, Sine, Custom };

  Kind kind = Kind::Identity;
  double noise_sigma = 0.0;
  // latent z sampling: uniform random (default) or a deterministic grid
  bool grid_z = false;
  std::function<double(double)> custom;  // used when kind == Custom

  double iota(double z) const {
    switch (kind) {
      case Kind::Identity: return z;
      case Kind::Sine: return std::sin(0.5 * M_PI * z);
      case Kind::Custom: return custom(z);
    }
    return z;
  }
  std::string name() const {
    switch (kind) {
      case Kind::Identity: return "identity";
      case Kind::Sine: return "sine";
      case Kind::Custom: return "custom";
    }
    return "?";
  }
};

struct CloudMeta {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // repetition index
  std::string source;        // "gaussian" or signal name
};

// n x d sample matrix with generation metadata. Immutable after construction;
// rows are contiguous.
struct PointCloud {
  RowMatrixXd points;
  CloudMeta meta;

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  std::span<const double> row(int i) const {
    return {points.data() + static_cast<std::size_t>(i) * points.cols(),
            static_cast<std::size_t>(points.cols())};
  }
};

// i.i.d. N_d(0, diag(sigma^2)) samples. Point j coordinate i is a pure
// function of (seed, stream, j, i), independent of thread scheduling.
PointCloud sample_gaussian(int n, const SigmaDiag& sigma, std::uint64_t seed,
                           std::uint64_t stream = 0);

// y_j = iota(z_j) + e_j with z_j ~ Unif[0,1] (or grid) and e_j ~ N(0, sigma^2).
PointCloud sample_signal_plus_noise(int n, const SignalModel& model, std::uint64_t seed,
                                    std::uint64_t stream = 0);

enum class BulkVariant { Bn, B1 };

// Coordinate-box bulk regions. Bn uses |x_i| <= sigma_i sqrt(log n/(d^2/4+d+1));
// B1 uses |x_i| <= sigma_i sqrt(2(1+beta) log n).
bool bulk_membership(std::span<const double> x, const SigmaDiag& sigma, int n,
                     BulkVariant variant, double beta = 0.1);

double bulk_halfwidth(const SigmaDiag& sigma, int axis, int n, BulkVariant variant,
                      double beta = 0.1);

}  // namespace rgg
