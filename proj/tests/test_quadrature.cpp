#include <doctest.h>

#include <cmath>

#include "rgg/quadrature.hpp"

using namespace rgg;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const QuadRule& gl = gauss_legendre(8);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i)
    acc += gl.weights[i] * std::pow(gl.nodes[i], 14);
  CHECK(acc == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
  double mass = 0.0;
  for (double w : gl.weights) mass += w;
  CHECK(mass == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gauss-hermite matches gaussian moments") {
  const QuadRule& gh = gauss_hermite(32);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    m0 += gh.weights[i];
    m2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
    m4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
  }
  CHECK(m0 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(std::sqrt(M_PI) * 0.75).epsilon(1e-13));
}

TEST_CASE("ball volumes across metrics") {
  auto one = [](std::span<const double>) { return 1.0; };
  // d=2: areas pi (p=2), 2 (p=1), 4 (inf)
  CHECK(ball_integrate(2, MetricOrder::lp(2.0), one, 48) ==
        doctest::Approx(M_PI).epsilon(1e-10));
  CHECK(ball_integrate(2, MetricOrder::lp(1.0), one, 48) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(ball_integrate(2, MetricOrder::linf(), one, 16) ==
        doctest::Approx(4.0).epsilon(1e-12));
  // d=3 euclidean: 4 pi / 3
  CHECK(ball_integrate(3, MetricOrder::lp(2.0), one, 32) ==
        doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-10));
  // general p via the Gamma closed form: V = 2^d Gamma(1+1/p)^d / Gamma(1+d/p)
  const double p = 1.5;
  const double vol = std::pow(2.0, 2) * std::pow(std::tgamma(1.0 + 1.0 / p), 2) /
                     std::tgamma(1.0 + 2.0 / p);
  const QuadResult q = ball_integrate_adaptive(2, MetricOrder::lp(p), one, 1e-9);
  CHECK(q.value == doctest::Approx(vol).epsilon(1e-8));
}

TEST_CASE("smooth integrands over the disc") {
  auto f = [](std::span<const double> z) { return std::exp(z[0] - 0.5 * z[1]); };
  // reference computed with a fine polar rule
  double ref = 0.0;
  const int nr = 2000, nt = 2000;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) / nr;
    for (int j = 0; j < nt; ++j) {
      const double th = 2.0 * M_PI * (j + 0.5) / nt;
      ref += r * std::exp(r * std::cos(th) - 0.5 * r * std::sin(th)) *
             (1.0 / nr) * (2.0 * M_PI / nt);
    }
  }
  const QuadResult q =
      ball_integrate_adaptive(2, MetricOrder::lp(2.0), f, 1e-10);
  CHECK(q.value == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("adaptive refinement reports failure honestly") {
  // oscillation far beyond what the order cap can resolve
  auto wild = [](std::span<const double> z) { return std::cos(1e8 * z[0]); };
  CHECK_THROWS_AS(ball_integrate_adaptive(1, MetricOrder::lp(2.0), wild, 1e-12,
                                          1e-300, 8, 64),
                  QuadratureError);
}

TEST_CASE("1-d adaptive integration") {
  const QuadResult q = integrate_1d_adaptive(
      [](double x) { return std::exp(-x * x); }, 0.0, 1.0, 1e-12);
  CHECK(q.value == doctest::Approx(0.74682413281242702).epsilon(1e-12));
}
