#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "pnlab/cell.hpp"

using namespace pnlab;

namespace {

// Rotation-number oracle for p = 0: lambda = (int_0^1 dv/(L - W'(v)))^{-1},
// computed by composite Simpson, cross-checked against the closed form
// sqrt(L^2 - 1/(4 pi^2)) for the default potential.
double rotation_oracle(const PeriodicPotential& pot, double L) {
  const int n = 200000;
  const double h = 1.0 / n;
  auto f = [&](double v) { return 1.0 / (L - pot.dW(v)); };
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return 1.0 / (s * h / 3.0);
}

CellSpec scalar_spec(double L) {
  CellSpec spec;
  spec.p = Rational(0, 1);
  spec.L = L;
  spec.nodes_per_period = 8;
  spec.T = 2000.0;
  spec.T0 = 1000.0;
  spec.dt_factor = 0.01;
  spec.probe_dt = 0.5;
  return spec;
}

}  // namespace

TEST_SUITE("cell") {

TEST_CASE("p = 0 cells stay spatially constant and follow the scalar flow") {
  CellSpec spec = scalar_spec(1.0);
  spec.T = 20.0;
  spec.T0 = 5.0;
  CellRun run = solve_cell(spec);
  // Spatially homogeneous data stay homogeneous.
  double flat = 0.0;
  for (int j = 0; j < run.final_field.size(); ++j) {
    flat = std::max(flat, std::abs(run.final_field[j] - run.final_field[0]));
  }
  CHECK(flat <= 1e-12);
}

TEST_CASE("rotation-number consistency at p = 0") {
  const PeriodicPotential pot = PeriodicPotential::sinusoidal_default();
  for (double L : {0.5, 1.0, 2.0}) {
    const double oracle = rotation_oracle(pot, L);
    const double closed = std::sqrt(L * L - 1.0 / (4.0 * kPi * kPi));
    REQUIRE(oracle == doctest::Approx(closed).epsilon(1e-10));
    const LambdaEstimate est = estimate_lambda(solve_cell(scalar_spec(L)));
    CHECK(std::abs(est.lambda_hat - oracle) <= 1e-3);
  }
}

TEST_CASE("trajectory stays inside the drift cone L +- (||W'|| + ||sigma||)") {
  CellSpec spec;
  spec.p = Rational(1, 2);
  spec.L = 1.0;
  spec.forcing = Forcing({{1, 1, 0.1, 0.2}});
  spec.T = 100.0;
  spec.T0 = 25.0;
  spec.nodes_per_period = 64;
  CellRun run = solve_cell(spec);
  const double width = spec.potential.sup_dW() + spec.forcing.sup();
  for (const ProbeSample& p : run.trajectory.probes) {
    CHECK(p.sup <= (spec.L + width) * p.tau + 0.05);
    CHECK(p.inf >= (spec.L - width) * p.tau - 0.05);
  }
}

TEST_CASE("initial slope matches -W'(p y)") {
  CellSpec spec;
  spec.p = Rational(1, 2);
  spec.L = 0.0;
  spec.T = 40.0;
  spec.T0 = 10.0;
  spec.nodes_per_period = 64;
  const PeriodicGrid grid = spec.make_grid();
  Reaction r;
  r.p = spec.p;
  StepperConfig cfg(1e-4, 0.5);
  EvolutionProblem prob{grid, half_laplacian_kernel(), r, ScalarField::zeros(grid), 0};
  ScalarField one = step(prob, prob.initial, 0.0, cfg);
  for (int j = 0; j < grid.size(); ++j) {
    CHECK(one[j] == doctest::Approx(-cfg.dt * spec.potential.dW(0.5 * grid.node(j))).epsilon(1e-3));
  }
  // and the long-run drift at L = 0 vanishes
  const LambdaEstimate est = estimate_lambda(solve_cell(spec));
  CHECK(std::abs(est.lambda_hat) <= 1e-3);
}

TEST_CASE("estimate_lambda requires enough probes") {
  Trajectory traj;
  for (int i = 0; i < 50; ++i) traj.probes.push_back({i * 1.0, 0.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(estimate_lambda(traj, 0.0), std::invalid_argument);
}

TEST_CASE("1x1 table equals the single-cell estimate") {
  CellSpec base;
  base.p = Rational(1, 2);
  base.L = 1.0;
  base.T = 100.0;
  base.T0 = 50.0;
  base.nodes_per_period = 64;
  HbarTable t = build_table({Rational(1, 2)}, {1.0}, base, 1);
  const LambdaEstimate est = estimate_lambda(solve_cell(base));
  CHECK(t.value(0, 0) == est.lambda_hat);
  CHECK(t.error(0, 0) == est.err_proxy);
}

TEST_CASE("rows are monotone in L and symmetric under even sigma") {
  CellSpec base;
  base.T = 150.0;
  base.T0 = 50.0;
  base.nodes_per_period = 64;
  base.dt_factor = 0.05;
  base.forcing = Forcing({{1, 0, 0.15, 0.0}});  // y-independent: even in y
  std::vector<Rational> ps = {Rational(-1, 2), Rational(1, 2)};
  std::vector<double> Ls = {-1.0, 0.0, 1.0};
  HbarTable t = build_table(ps, Ls, base, 2);
  CHECK(t.rows_monotone());
  // lambda(p, L) == lambda(-p, L) within 2(e + e').
  for (std::size_t il = 0; il < Ls.size(); ++il) {
    const double dev = std::abs(t.value(0, il) - t.value(1, il));
    CHECK(dev <= 2.0 * (t.error(0, il) + t.error(1, il)) + 1e-12);
  }
}

TEST_CASE("hbar table round trip is bit exact") {
  HbarTable t;
  t.ps = {Rational(-1, 2), Rational(0, 1), Rational(3, 4)};
  t.Ls = {-1.0, 0.1, 2.0};
  for (int i = 0; i < 9; ++i) {
    t.lambda.push_back(std::sin(i) * 1e-3 + i);
    t.err.push_back(1e-9 * (i + 1));
    t.converged.push_back(i % 2);
  }
  t.meta.potential_hash = 0x1234abcd5678ef00ull;
  t.meta.forcing_hash = 42;
  t.meta.nodes_per_period = 128;
  t.meta.T = 400.0;
  t.meta.T0 = 200.0;
  t.meta.dt_factor = 0.05;
  t.meta.tol = 1e-3;
  const std::string path = "hbar_roundtrip_test.txt";
  t.write(path);
  HbarTable r = HbarTable::read(path);
  std::remove(path.c_str());
  CHECK(r.ps.size() == t.ps.size());
  for (std::size_t i = 0; i < t.ps.size(); ++i) {
    CHECK(r.ps[i].num == t.ps[i].num);
    CHECK(r.ps[i].den == t.ps[i].den);
  }
  for (std::size_t i = 0; i < t.lambda.size(); ++i) {
    CHECK(r.lambda[i] == t.lambda[i]);  // bit exact
    CHECK(r.err[i] == t.err[i]);
    CHECK(r.converged[i] == t.converged[i]);
  }
  CHECK(r.Ls == t.Ls);
  CHECK(r.meta.potential_hash == t.meta.potential_hash);
  CHECK(r.meta.T == t.meta.T);
}

TEST_CASE("symmetry suite refuses non-symmetric forcing") {
  CellSpec base;
  base.forcing = Forcing({{1, 1, 0.2, 0.3}});  // neither even nor odd in y
  try {
    symmetry_suite({Rational(1, 2)}, {1.0}, base);
    FAIL("expected refusal");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("hypothesis") != std::string::npos);
  }
}

TEST_CASE("cell spec validation") {
  CellSpec spec;
  spec.p = Rational(1, 3);  // period 3 x power-of-two npp is never a power of two
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  CellSpec bad_burnin;
  bad_burnin.T = 100.0;
  bad_burnin.T0 = 10.0;  // < T/4
  CHECK_THROWS_AS(bad_burnin.validate(), std::invalid_argument);
}

}  // TEST_SUITE
