#include <doctest.h>

#include <cmath>

#include "rgg/metric.hpp"
#include "rgg/rng.hpp"
#include "rgg/sampling.hpp"

using namespace rgg;

TEST_CASE("gaussian sampling is deterministic per (n, params, seed)") {
  const SigmaDiag sigma = SigmaDiag::isotropic(1, 1.0);
  const PointCloud a = sample_gaussian(4, sigma, 7);
  const PointCloud b = sample_gaussian(4, sigma, 7);
  REQUIRE(a.n() == 4);
  for (int i = 0; i < 4; ++i) CHECK(a.points(i, 0) == b.points(i, 0));
  const PointCloud c = sample_gaussian(4, sigma, 8);
  bool any_diff = false;
  for (int i = 0; i < 4; ++i) any_diff |= a.points(i, 0) != c.points(i, 0);
  CHECK(any_diff);
}

TEST_CASE("sample variance matches the law of large numbers") {
  const int n = 100000;
  const PointCloud cloud = sample_gaussian(n, SigmaDiag::isotropic(1, 1.0), 123);
  double mean = cloud.points.col(0).mean();
  double var = (cloud.points.col(0).array() - mean).square().sum() / (n - 1);
  CHECK(var > 0.98);
  CHECK(var < 1.02);
}

TEST_CASE("coordinates are independent across axes") {
  const int n = 100000;
  const SigmaDiag sigma(std::vector<double>{1.0, 4.0});
  const PointCloud cloud = sample_gaussian(n, sigma, 9);
  const double m0 = cloud.points.col(0).mean();
  const double m1 = cloud.points.col(1).mean();
  double cov = 0.0;
  for (int i = 0; i < n; ++i)
    cov += (cloud.points(i, 0) - m0) * (cloud.points(i, 1) - m1);
  cov /= n - 1;
  CHECK(std::abs(cov) < 0.02);
  // per-axis variances come out right too
  const double v1 = (cloud.points.col(1).array() - m1).square().sum() / (n - 1);
  CHECK(v1 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("invalid sigma is rejected") {
  CHECK_THROWS_AS(SigmaDiag(std::vector<double>{1.0, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(SigmaDiag(std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(sample_gaussian(1, SigmaDiag::isotropic(1, 1.0), 0),
                  InvalidArgument);
}

TEST_CASE("clean signal models stay in [0,1]") {
  SignalModel identity{SignalModel::Kind::Identity, 0.0, false, {}};
  SignalModel sine{SignalModel::Kind::Sine, 0.0, false, {}};
  for (const auto& model : {identity, sine}) {
    const PointCloud cloud = sample_signal_plus_noise(5000, model, 3);
    CHECK(cloud.points.minCoeff() >= 0.0);
    CHECK(cloud.points.maxCoeff() <= 1.0);
  }
}

TEST_CASE("signal-plus-noise variance adds uniform and gaussian parts") {
  SignalModel model{SignalModel::Kind::Identity, 1.0, false, {}};
  const int n = 100000;
  const PointCloud cloud = sample_signal_plus_noise(n, model, 5);
  const double mean = cloud.points.col(0).mean();
  const double var = (cloud.points.col(0).array() - mean).square().sum() / (n - 1);
  const double expected = 1.0 / 12.0 + 1.0;
  CHECK(var == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("zero-noise cloud is the pushforward of z under iota") {
  SignalModel model{SignalModel::Kind::Sine, 0.0, true, {}};
  const int n = 64;
  const PointCloud cloud = sample_signal_plus_noise(n, model, 1);
  for (int j = 0; j < n; ++j) {
    const double z = (j + 0.5) / n;
    CHECK(cloud.points(j, 0) == std::sin(0.5 * M_PI * z));
  }
}

TEST_CASE("lp distances on the 3-4-5 pair") {
  const double x[2] = {0.0, 0.0};
  const double y[2] = {3.0, 4.0};
  CHECK(lp_distance({x, 2}, {y, 2}, MetricOrder::lp(2.0)) == doctest::Approx(5.0));
  CHECK(lp_distance({x, 2}, {y, 2}, MetricOrder::linf()) == doctest::Approx(4.0));
  CHECK(lp_distance({x, 2}, {y, 2}, MetricOrder::lp(1.0)) == doctest::Approx(7.0));
  const double z[3] = {0, 0, 0};
  CHECK_THROWS_AS(lp_distance({x, 2}, {z, 3}, MetricOrder::lp(2.0)),
                  InvalidArgument);
}

TEST_CASE("lp distance is non-increasing in p and satisfies the triangle inequality") {
  CounterRng rng(2024, 0);
  const std::vector<MetricOrder> orders = {MetricOrder::lp(1.0), MetricOrder::lp(1.5),
                                           MetricOrder::lp(2.0), MetricOrder::lp(3.0),
                                           MetricOrder::linf()};
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 200; ++trial) {
    double a[3], b[3], c[3];
    for (int i = 0; i < 3; ++i) {
      a[i] = rng.normal(2 * ctr++);
      b[i] = rng.normal(2 * ctr++);
      c[i] = rng.normal(2 * ctr++);
    }
    double prev = 1e300;
    for (const auto& p : orders) {
      const double dist = lp_distance({a, 3}, {b, 3}, p);
      CHECK(dist <= prev + 1e-12);
      prev = dist;
      CHECK(lp_distance({a, 3}, {c, 3}, p) <=
            dist + lp_distance({b, 3}, {c, 3}, p) + 1e-12);
    }
  }
}

TEST_CASE("bulk membership thresholds") {
  const SigmaDiag sigma = SigmaDiag::isotropic(1, 1.0);
  const double origin[1] = {0.0};
  const int n9 = static_cast<int>(std::ceil(std::exp(9.0)));
  CHECK(bulk_membership({origin, 1}, sigma, n9, BulkVariant::Bn));
  CHECK(bulk_membership({origin, 1}, sigma, n9, BulkVariant::B1));

  // d=1: bound sqrt(log n / 2.25); at log n = 9 the threshold is 2
  CHECK(bulk_halfwidth(sigma, 0, n9, BulkVariant::Bn) == doctest::Approx(2.0).epsilon(1e-4));
  const double outside[1] = {2.1};
  const double inside[1] = {1.9};
  CHECK_FALSE(bulk_membership({outside, 1}, sigma, n9, BulkVariant::Bn));
  CHECK(bulk_membership({inside, 1}, sigma, n9, BulkVariant::Bn));

  const int n10 = static_cast<int>(std::ceil(std::exp(10.0)));
  CHECK(bulk_halfwidth(sigma, 0, n10, BulkVariant::B1, 0.1) ==
        doctest::Approx(std::sqrt(22.0)).epsilon(1e-4));
}
