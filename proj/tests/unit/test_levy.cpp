#include "doctest.h"

#include <cmath>
#include <random>

#include "pnlab/levy.hpp"

using namespace pnlab;

TEST_SUITE("levy") {

TEST_CASE("symbol values") {
  const LevyKernel1D half = half_laplacian_kernel();
  CHECK(levy_symbol(0, half, 5.0) == 0.0);
  // g0 = 1/pi, Lambda = 2pi, k = 3: symbol -|xi| at xi = 3.
  CHECK(levy_symbol(3, half, 2.0 * kPi) == doctest::Approx(-3.0).epsilon(1e-14));
  // Linear in g0.
  const LevyKernel1D twice(2.0 / kPi, 1.0);
  CHECK(levy_symbol(1, twice, 2.0 * kPi) == doctest::Approx(-2.0).epsilon(1e-14));
  // Even, nonpositive, zero only at k = 0.
  for (int k = -8; k <= 8; ++k) {
    CHECK(levy_symbol(k, half, 3.0) == levy_symbol(-k, half, 3.0));
    if (k != 0) CHECK(levy_symbol(k, half, 3.0) < 0.0);
  }
}

TEST_CASE("symbol normalization cross-checked against quadrature on cos") {
  // Oracle for the g0 = 2/pi case: apply the direct quadrature to cos(x) and
  // compare the amplitude with the symbol value -2.
  const LevyKernel1D twice(2.0 / kPi, 1.0);
  PeriodicGrid grid(2.0 * kPi, 512);
  ScalarField u = ScalarField::sample(grid, [](double x) { return std::cos(x); });
  ScalarField v = apply_quadrature(u, twice);
  for (int j = 0; j < grid.size(); j += 37) {
    CHECK(v[j] == doctest::Approx(-2.0 * std::cos(grid.node(j))).epsilon(2e-4));
  }
}

TEST_CASE("spectral path: eigenfunctions, constants, mean") {
  const LevyKernel1D half = half_laplacian_kernel();
  const double Lambda = 3.0;
  PeriodicGrid grid(Lambda, 128);
  ScalarField u = ScalarField::sample(grid, [&](double x) { return std::cos(2.0 * kPi * x / Lambda); });
  ScalarField v = apply_spectral(u, half);
  for (int j = 0; j < grid.size(); ++j) {
    CHECK(v[j] == doctest::Approx(-(2.0 * kPi / Lambda) * u[j]).epsilon(1e-12));
  }

  ScalarField c = ScalarField::sample(grid, [](double) { return 7.0; });
  ScalarField vc = apply_spectral(c, half);
  CHECK(vc.sup_abs() < 1e-12);

  // Mean is preserved as zero (k=0 coefficient mapped to 0).
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarField r = ScalarField::sample(grid, [&](double) { return dist(rng); });
  CHECK(std::abs(apply_spectral(r, half).mean()) < 1e-13);
}

TEST_CASE("spectral path is linear on random fields") {
  const LevyKernel1D half = half_laplacian_kernel();
  PeriodicGrid grid(1.0, 256);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarField u = ScalarField::sample(grid, [&](double) { return dist(rng); });
  ScalarField v = ScalarField::sample(grid, [&](double) { return dist(rng); });
  const double a = 1.7, b = -0.3;
  ScalarField combo(grid, [&] {
    std::vector<double> w(grid.size());
    for (int j = 0; j < grid.size(); ++j) w[j] = a * u[j] + b * v[j];
    return w;
  }());
  ScalarField lhs = apply_spectral(combo, half);
  ScalarField Iu = apply_spectral(u, half);
  ScalarField Iv = apply_spectral(v, half);
  double worst = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    worst = std::max(worst, std::abs(lhs[j] - a * Iu[j] - b * Iv[j]));
  }
  CHECK(worst <= 1e-10 * (u.sup_abs() + v.sup_abs()));
}

TEST_CASE("translation equivariance is bit exact") {
  const LevyKernel1D half = half_laplacian_kernel();
  PeriodicGrid grid(2.0, 64);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> raw(grid.size());
  for (double& x : raw) x = dist(rng);
  std::vector<double> shifted(grid.size());
  for (int j = 0; j < grid.size(); ++j) shifted[j] = raw[(j - 1 + grid.size()) % grid.size()];

  LevyOperator1D op(grid, half);
  ScalarField out = op.apply(ScalarField(grid, raw));
  ScalarField out_shifted = op.apply(ScalarField(grid, shifted));
  for (int j = 0; j < grid.size(); ++j) {
    CHECK(out_shifted[j] == out[(j - 1 + grid.size()) % grid.size()]);
  }
}

TEST_CASE("stencil off-diagonal entries are nonnegative") {
  PeriodicGrid grid(2.0, 256);
  LevyOperator1D op(grid, half_laplacian_kernel());
  for (int d = 1; d < grid.size(); ++d) CHECK(op.stencil()[d] >= -1e-12 * std::abs(op.stencil()[0]));
  CHECK(op.stencil()[0] < 0.0);
}

TEST_CASE("quadrature path: constants, accuracy, self convergence") {
  const LevyKernel1D half = half_laplacian_kernel();
  {
    PeriodicGrid grid(2.0 * kPi, 64);
    ScalarField c = ScalarField::sample(grid, [](double) { return -4.2; });
    CHECK(apply_quadrature(c, half).sup_abs() <= 1e-12);
  }
  // Within 5% of the exact eigenvalue at n = 256.
  {
    PeriodicGrid grid(2.0 * kPi, 256);
    ScalarField u = ScalarField::sample(grid, [](double x) { return std::cos(x); });
    ScalarField v = apply_quadrature(u, half);
    double err = 0.0;
    for (int j = 0; j < grid.size(); ++j) err = std::max(err, std::abs(v[j] + std::cos(grid.node(j))));
    CHECK(err <= 0.05);
  }
  // Error vs spectral decreases monotonically under doubling (and at least
  // halves, first order).
  {
    double prev = 1e300;
    for (int n : {64, 128, 256, 512}) {
      PeriodicGrid grid(2.0 * kPi, n);
      ScalarField u = ScalarField::sample(grid, [](double x) { return std::cos(x); });
      ScalarField vq = apply_quadrature(u, half);
      ScalarField vs = apply_spectral(u, half);
      const double err = sup_abs_diff(vq, vs);
      if (prev < 1e299) CHECK(err <= 0.6 * prev);
      prev = err;
    }
  }
}

TEST_CASE("quadrature rejects r < 2h") {
  PeriodicGrid grid(128.0, 32);  // h = 4
  ScalarField u = ScalarField::zeros(grid);
  CHECK_THROWS_AS(apply_quadrature(u, LevyKernel1D(1.0 / kPi, 1.0)), std::invalid_argument);
}

TEST_CASE("grid and field validation") {
  CHECK_THROWS_AS(PeriodicGrid(1.0, 100), std::invalid_argument);  // not a power of two
  CHECK_THROWS_AS(PeriodicGrid(1.0, 4), std::invalid_argument);    // < 8
  CHECK_THROWS_AS(PeriodicGrid(-1.0, 16), std::invalid_argument);
  PeriodicGrid g(1.0, 16);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(8, 0.0)), std::invalid_argument);
  std::vector<double> bad(16, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(ScalarField(g, bad), std::invalid_argument);
}

}  // TEST_SUITE
