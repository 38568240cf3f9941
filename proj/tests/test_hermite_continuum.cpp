#include <doctest.h>

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rgg/continuum.hpp"
#include "rgg/hermite.hpp"
#include "rgg/quadrature.hpp"
#include "rgg/rng.hpp"

using namespace rgg;

TEST_CASE("hermite recurrence basics") {
  CHECK(hermite_eval(0, 3.7) == 1.0);
  CHECK(hermite_eval(1, 0.25) == doctest::Approx(0.5));
  CHECK(hermite_eval(2, 1.5) == doctest::Approx(7.0));  // 4x^2 - 2
}

// Rodrigues-formula oracle: H_m(x) = (-1)^m e^{x^2} d^m/dx^m e^{-x^2},
// the derivative taken by high-order finite differences with Richardson
// extrapolation in quad precision.
static double rodrigues_h5(double x) {
  using Q = __float128;
  auto f = [](Q t) { return expq(-t * t); };
  // central 5th-derivative stencil of order h^2 (offsets -3..3)
  auto d5 = [&](double h) -> Q {
    const Q hh = h;
    const Q xx = x;
    const Q half = Q(1) / Q(2);
    return (-half * f(xx - 3 * hh) + Q(2) * f(xx - 2 * hh) -
            (Q(5) / Q(2)) * f(xx - hh) + (Q(5) / Q(2)) * f(xx + hh) -
            Q(2) * f(xx + 2 * hh) + half * f(xx + 3 * hh)) /
           (hh * hh * hh * hh * hh);
  };
  // Richardson extrapolation over the h^2 error series
  const int levels = 8;
  Q table[levels];
  double h = 0.5;
  for (int i = 0; i < levels; ++i) {
    table[i] = d5(h);
    h /= 2.0;
  }
  for (int k = 1; k < levels; ++k) {
    Q pow4 = 1;
    for (int j = 0; j < k; ++j) pow4 *= 4;
    for (int i = levels - 1; i >= k; --i)
      table[i] = (pow4 * table[i] - table[i - 1]) / (pow4 - Q(1));
  }
  const Q result = -expq(Q(x) * x) * table[levels - 1];
  return static_cast<double>(result);
}

TEST_CASE("H5 matches the Rodrigues differentiation oracle") {
  const double oracle = rodrigues_h5(0.7);
  CHECK(std::abs(hermite_eval(5, 0.7) - oracle) < 1e-9);
  // closed form 32x^5 - 160x^3 + 120x at x = 0.7
  CHECK(hermite_eval(5, 0.7) == doctest::Approx(34.49824).epsilon(1e-12));
}

TEST_CASE("eigenfunction evaluation and normalization") {
  const SigmaDiag s1 = SigmaDiag::isotropic(1, 1.0);
  const EigenFunction psi0(HermiteIndex({0}), s1);
  const double x0[1] = {2.31};
  CHECK(psi0({x0, 1}) == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-14));

  const EigenFunction psi1(HermiteIndex({1}), s1);
  const double x1[1] = {1.0};
  CHECK(psi1({x1, 1}) == doctest::Approx(1.0622519320271968).epsilon(1e-12));

  const SigmaDiag s2(std::vector<double>{1.0, 4.0});
  const EigenFunction flat(HermiteIndex({0, 0}), s2);
  const double x2[2] = {0.4, -0.7};
  CHECK(flat({x2, 2}) ==
        doctest::Approx(std::sqrt(1.0 / (std::sqrt(M_PI) * 1.0)) *
                        std::sqrt(1.0 / (std::sqrt(M_PI) * 2.0)))
            .epsilon(1e-12));
  CHECK(flat.eigenvalue() == 0.0);
  const EigenFunction mixed(HermiteIndex({2, 1}), s2);
  CHECK(mixed.eigenvalue() == doctest::Approx(2.0 * 2 / 1.0 + 2.0 * 1 / 4.0));
}

TEST_CASE("orthonormality under gauss-hermite quadrature") {
  const SigmaDiag s(std::vector<double>{2.25});
  const QuadRule& gh = gauss_hermite(64);
  for (int m = 0; m <= 12; ++m)
    for (int mp = m; mp <= 12; ++mp) {
      const EigenFunction a(HermiteIndex({m}), s);
      const EigenFunction b(HermiteIndex({mp}), s);
      double acc = 0.0;
      for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        const double x[1] = {s.sigma(0) * gh.nodes[i]};
        acc += gh.weights[i] * a({x, 1}) * b({x, 1});
      }
      acc *= s.sigma(0);
      CHECK(std::abs(acc - (m == mp ? 1.0 : 0.0)) < 1e-10);
    }
}

TEST_CASE("spectrum enumeration: exact example patterns") {
  // d=1, sigma=1: 0,2,4,...
  const ContinuumSpectrum e1 = enumerate_spectrum(SigmaDiag::isotropic(1, 1.0), 7);
  CHECK(e1.exact);
  const std::vector<double> want1 = {0, 2, 4, 6, 8, 10, 12};
  REQUIRE(e1.values.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(e1.values[i] == want1[i]);

  // d=2 equal sigma: multiplicity pattern 1,2,3,...
  const ContinuumSpectrum e2 = enumerate_spectrum(SigmaDiag::isotropic(2, 1.0), 6);
  const std::vector<double> want2 = {0, 2, 2, 4, 4, 4};
  REQUIRE(e2.values.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(e2.values[i] == want2[i]);
  REQUIRE(e2.groups.size() >= 3);
  CHECK(e2.groups[0].multiplicity == 1);
  CHECK(e2.groups[1].multiplicity == 2);
  CHECK(e2.groups[2].multiplicity == 3);

  // d=2, sigma^2 = (1, 2): values s with multiplicity floor(s/2)+1
  const ContinuumSpectrum e3 =
      enumerate_spectrum(SigmaDiag(std::vector<double>{1.0, 2.0}), 6);
  const std::vector<double> want3 = {0, 1, 2, 2, 3, 3};
  REQUIRE(e3.values.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(e3.values[i] == want3[i]);

  // count=1
  const ContinuumSpectrum e0 = enumerate_spectrum(SigmaDiag::isotropic(1, 1.0), 1);
  REQUIRE(e0.values.size() == 1);
  CHECK(e0.values[0] == 0.0);
  CHECK(e0.groups[0].multiplicity == 1);  // zero eigenvalue is simple
}

TEST_CASE("spectrum enumeration: brute force and prefix stability") {
  const SigmaDiag sigma(std::vector<double>{1.0, 2.0, 0.5});
  const ContinuumSpectrum spec = enumerate_spectrum(sigma, 50);
  std::vector<double> brute;
  for (int a = 0; a <= 20; ++a)
    for (int b = 0; b <= 20; ++b)
      for (int c = 0; c <= 20; ++c)
        brute.push_back(2.0 * a / 1.0 + 2.0 * b / 2.0 + 2.0 * c / 0.5);
  std::sort(brute.begin(), brute.end());
  for (int i = 0; i < 50; ++i) CHECK(spec.values[i] == brute[i]);

  const ContinuumSpectrum prefix = enumerate_spectrum(sigma, 49);
  for (int i = 0; i < 49; ++i) CHECK(prefix.values[i] == spec.values[i]);

  // non-decreasing
  for (int i = 1; i < 50; ++i) CHECK(spec.values[i] >= spec.values[i - 1]);

  // irrational variances go through the float path and still match brute force
  const SigmaDiag odd(std::vector<double>{M_PI / 3.0, 1.0});
  const ContinuumSpectrum fspec = enumerate_spectrum(odd, 30);
  CHECK_FALSE(fspec.exact);
  std::vector<double> fbrute;
  for (int a = 0; a <= 40; ++a)
    for (int b = 0; b <= 40; ++b)
      fbrute.push_back(2.0 * a / (M_PI / 3.0) + 2.0 * b);
  std::sort(fbrute.begin(), fbrute.end());
  for (int i = 0; i < 30; ++i)
    CHECK(fspec.values[i] == doctest::Approx(fbrute[i]).epsilon(1e-12));
}

TEST_CASE("laplace-beltrami acts diagonally on eigenfunctions") {
  const SigmaDiag s(std::vector<double>{1.0, 2.0});
  for (int k1 : {0, 1, 3})
    for (int k2 : {0, 2}) {
      const EigenFunction phi(HermiteIndex({k1, k2}), s);
      const HermitePoly poly = HermitePoly::from_eigenfunction(phi);
      const double x[2] = {0.37, -1.21};
      CHECK(apply_laplace_beltrami(poly, {x, 2}) ==
            doctest::Approx(phi.eigenvalue() * phi({x, 2})).epsilon(1e-11));
    }
  // constants sit in the kernel
  const HermitePoly c = HermitePoly::constant(s, 3.4);
  const double x[2] = {1.0, 2.0};
  CHECK(apply_laplace_beltrami(c, {x, 2}) == 0.0);
}

TEST_CASE("laplace-beltrami of the coordinate function against finite differences") {
  const SigmaDiag s1 = SigmaDiag::isotropic(1, 1.0);
  const HermitePoly f = HermitePoly::coordinate(s1, 0);
  const double pts[] = {0.0, 0.5, -1.3};
  for (double x : pts) {
    const double xs[1] = {x};
    const double lhs = apply_laplace_beltrami(f, {xs, 1});
    CHECK(lhs == doctest::Approx(2.0 * x).epsilon(1e-12));
    // central finite differences of -f'' + 2x f'
    const double h = 1e-5;
    const double xm[1] = {x - h}, xp[1] = {x + h};
    const double fd = -(f({xp, 1}) - 2.0 * f({xs, 1}) + f({xm, 1})) / (h * h) +
                      2.0 * x * (f({xp, 1}) - f({xm, 1})) / (2.0 * h);
    CHECK(std::abs(lhs - fd) < 1e-6);
  }
}

TEST_CASE("f-norm quadrature") {
  const SigmaDiag s1 = SigmaDiag::isotropic(1, 1.0);
  const EigenFunction psi0(HermiteIndex({0}), s1);
  const EigenFunction psi3(HermiteIndex({3}), s1);
  CHECK(f_norm([&](std::span<const double> x) { return psi0(x); }, s1) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f_norm([&](std::span<const double> x) { return psi0(x) + psi3(x); }, s1) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  // coordinate function: sqrt(integral x^2 e^{-x^2}) = (sqrt(pi)/2)^{1/2}
  CHECK(f_norm([](std::span<const double> x) { return x[0]; }, s1) ==
        doctest::Approx(std::sqrt(std::sqrt(M_PI) / 2.0)).epsilon(1e-12));
  CHECK(std::sqrt(std::sqrt(M_PI) / 2.0) == doctest::Approx(0.941396).epsilon(1e-6));
}

TEST_CASE("hermite addition formula") {
  CounterRng rng(5150, 0);
  for (int m = 0; m <= 10; ++m)
    for (int trial = 0; trial < 10; ++trial) {
      const double x = 2.0 * rng.normal(2 * (m * 10 + trial));
      const double z = rng.normal(2 * (m * 10 + trial) + 1);
      double series = 0.0;
      double binom = 1.0;
      for (int j = m; j >= 0; --j) {
        // binom(m, j); iterate from j=m down
        series += binom * hermite_eval(j, x) * std::pow(2.0 * z, m - j);
        binom *= static_cast<double>(j) / (m - j + 1.0);
      }
      const double direct = hermite_eval(m, x + z);
      CHECK(std::abs(series - direct) <=
            1e-9 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("hermite generating identity for the weight ratio") {
  const double sigma = 1.3;
  CounterRng rng(808, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const double x = 1.5 * rng.normal(2 * trial);
    const double z = (rng.uniform(2 * trial + 1) - 0.5) * 0.5 * sigma;  // |z| <= sigma/4
    const double direct = std::exp(-((x + z) * (x + z) - x * x) / (2 * sigma * sigma));
    double series = 0.0;
    double term_pow = 1.0;  // (-z/(2 sigma))^alpha / alpha!
    for (int alpha = 0; alpha < 40; ++alpha) {
      series += hermite_eval(alpha, x / sigma) * term_pow;
      term_pow *= (-z / (2.0 * sigma)) / (alpha + 1.0);
    }
    series *= std::exp(-z * z / (4.0 * sigma * sigma));
    CHECK(std::abs(series - direct) < 1e-8);
  }
}

TEST_CASE("eigen-relation residual on quadrature nodes") {
  // |Delta_rho psi_k - lambda_k psi_k| <= 1e-8 max|psi_k| over GH nodes,
  // all |k| <= 10, d <= 2
  const QuadRule& gh = gauss_hermite(24);
  for (int d = 1; d <= 2; ++d) {
    const SigmaDiag s = d == 1 ? SigmaDiag(std::vector<double>{1.21})
                               : SigmaDiag(std::vector<double>{1.21, 0.64});
    std::vector<std::vector<int>> indices;
    if (d == 1) {
      for (int k = 0; k <= 10; ++k) indices.push_back({k});
    } else {
      for (int k1 = 0; k1 <= 10; ++k1)
        for (int k2 = 0; k1 + k2 <= 10; ++k2) indices.push_back({k1, k2});
    }
    for (const auto& idx : indices) {
      const EigenFunction phi(HermiteIndex(idx), s);
      const HermitePoly poly = HermitePoly::from_eigenfunction(phi);
      const HermitePoly applied = poly.laplace_beltrami();
      const double lambda = phi.eigenvalue();
      double max_resid = 0.0, max_psi = 0.0;
      std::vector<double> x(d);
      std::vector<int> grid(d, 0);
      for (;;) {
        for (int i = 0; i < d; ++i) x[i] = s.sigma(i) * gh.nodes[grid[i]];
        const double psi = phi({x.data(), x.size()});
        max_psi = std::max(max_psi, std::abs(psi));
        max_resid = std::max(max_resid,
                             std::abs(applied({x.data(), x.size()}) - lambda * psi));
        int axis = 0;
        while (axis < d) {
          if (++grid[axis] < static_cast<int>(gh.nodes.size())) break;
          grid[axis] = 0;
          ++axis;
        }
        if (axis == d) break;
      }
      CHECK(max_resid <= 1e-8 * std::max(max_psi, 1.0));
    }
  }
}

TEST_CASE("spectrum csv export") {
  const ContinuumSpectrum spec =
      enumerate_spectrum(SigmaDiag(std::vector<double>{1.0, 2.0}), 4);
  const std::string csv = spectrum_csv(spec);
  CHECK(csv.find("j,value,group,k_tuple") == 0);
  CHECK(csv.find("1,0,0,0;0") != std::string::npos);
}
