#include "doctest.h"

#include <cmath>
#include <random>

#include "pnlab/potential.hpp"

using namespace pnlab;

TEST_SUITE("potential") {

TEST_CASE("default potential matches the sinusoidal form") {
  PeriodicPotential pot = PeriodicPotential::sinusoidal_default();
  const EvalTriple at0 = eval_potential(pot, 0.0);
  CHECK(at0.value == doctest::Approx(0.0));
  CHECK(at0.first == doctest::Approx(0.0));
  CHECK(at0.second == doctest::Approx(1.0).epsilon(1e-14));  // alpha = 1

  const EvalTriple q = eval_potential(pot, 0.25);
  CHECK(q.value == doctest::Approx(1.0 / (4.0 * kPi * kPi)).epsilon(1e-14));
  CHECK(q.first == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
  CHECK(q.second == doctest::Approx(0.0));

  // Periodicity is bit exact (wrapped argument).
  const EvalTriple shifted = eval_potential(pot, 1.25);
  CHECK(shifted.value == q.value);
  CHECK(shifted.first == q.first);
  CHECK(shifted.second == q.second);

  CHECK(pot.alpha() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pot.is_W_class());
}

TEST_CASE("alpha equals the second-difference estimate at 0 within 1e-8") {
  PeriodicPotential pot({1.0 / (4.0 * kPi * kPi), 1.0 / (100.0 * kPi * kPi)});
  auto fd = [&](double h) { return (pot.W(h) + pot.W(-h) - 2.0 * pot.W(0.0)) / (h * h); };
  // Richardson over a factor-2 step cancels the h^2 term.
  const double est = (4.0 * fd(1e-4) - fd(2e-4)) / 3.0;
  CHECK(std::abs(pot.alpha() - est) <= 1e-8);
}

TEST_CASE("certified sup bounds dominate dense sampling") {
  PeriodicPotential pot({1.0 / (4.0 * kPi * kPi), -1.0 / (60.0 * kPi * kPi)});
  double max_d1 = 0.0, max_d2 = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double v = i / 10000.0;
    max_d1 = std::max(max_d1, std::abs(pot.dW(v)));
    max_d2 = std::max(max_d2, std::abs(pot.d2W(v)));
  }
  CHECK(pot.sup_dW() >= max_d1);
  CHECK(pot.sup_d2W() >= max_d2);
  CHECK(pot.sup_dW() <= max_d1 * 1.01 + 1e-6);
}

TEST_CASE("W-class flag rejects sign-indefinite series") {
  // Large negative second harmonic makes W dip below zero inside (0,1).
  PeriodicPotential bad({1.0 / (4.0 * kPi * kPi), -1.0 / (4.0 * kPi * kPi)});
  CHECK_FALSE(bad.is_W_class());
}

TEST_CASE("forcing examples") {
  CHECK(eval_forcing(Forcing::zero(), 0.3, 0.7) == 0.0);
  Forcing f({{1, 0, 1.0, 0.0}});
  CHECK(eval_forcing(f, 0.5, 123.456) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("forcing double periodicity is exact at random points") {
  Forcing f({{1, 2, 0.7, 0.3}, {2, -1, -0.4, 1.1}, {0, 3, 0.2, 0.0}});
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const double tau = dist(rng), y = dist(rng);
    const double base = f.eval(tau, y);
    CHECK(f.eval(tau + 1.0, y) == base);
    CHECK(f.eval(tau, y + 1.0) == base);
    CHECK(f.eval(tau + 1.0, y + 1.0) == base);
  }
}

TEST_CASE("forcing parity detection") {
  Forcing even({{1, 0, 0.5, 0.0}});  // no y dependence: even and odd fails
  CHECK(even.even_in_y());
  CHECK_FALSE(even.odd_in_y());
  CHECK(Forcing::zero().even_in_y());
  CHECK(Forcing::zero().odd_in_y());
  // cos(2 pi (tau + y) + theta) is neither even nor odd in y.
  Forcing skew({{1, 1, 0.5, 0.3}});
  CHECK_FALSE(skew.even_in_y());
  CHECK_FALSE(skew.odd_in_y());
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(PeriodicPotential({}), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicPotential({std::nan("")}), std::invalid_argument);
}

}  // TEST_SUITE
