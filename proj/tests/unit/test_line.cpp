#include "doctest.h"

#include <cmath>

#include "pnlab/layer.hpp"
#include "pnlab/line_profile.hpp"

using namespace pnlab;

TEST_SUITE("line") {

TEST_CASE("profile interpolation and tail lookup") {
  const int N = 2001;
  std::vector<double> samples(N);
  for (int i = 0; i < N; ++i) {
    const double x = -10.0 + i * 20.0 / (N - 1);
    samples[i] = std::atan(x);
  }
  LineProfile prof(10.0, samples, TailModel::step(-kPi / 2.0, kPi / 2.0), 0.2);
  CHECK(prof.value(0.37) == doctest::Approx(std::atan(0.37)).epsilon(1e-8));
  CHECK(prof.value(25.0) == kPi / 2.0);
  CHECK(prof.value(-25.0) == -kPi / 2.0);
}

TEST_CASE("tail model mismatch is rejected") {
  std::vector<double> samples(64, 0.5);
  CHECK_THROWS_AS(LineProfile(5.0, samples, TailModel::zero(), 0.05), std::invalid_argument);
}

TEST_CASE("closed-form layer: I1[phi] = W'(phi) pointwise") {
  LayerProfile layer = make_closed_form_layer(100.0, 4097);
  const LevyKernel1D half = half_laplacian_kernel();
  // x = 0: W'(1/2) = 0.
  // x = 1: sin(2 pi phi(1))/(2 pi) = -1/(2 pi) since phi(1) = 3/4.
  auto vals = apply_line(layer.profile(), half, {0.0, 1.0});
  CHECK(std::abs(vals[0]) <= 1e-4);
  CHECK(vals[1] == doctest::Approx(-1.0 / (2.0 * kPi)).epsilon(1e-3));

  // Interior residual envelope (module invariant, R = 100).
  std::vector<double> i1 = line_apply_nodes(layer.profile(), half);
  double worst = 0.0;
  for (int i = 0; i < layer.nodes(); ++i) {
    const double x = layer.node(i);
    if (std::abs(x) > 50.0) continue;
    worst = std::max(worst, std::abs(i1[i] - std::sin(2.0 * kPi * layer.value(x)) / (2.0 * kPi)));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("constant profile with matching step tail maps to zero") {
  std::vector<double> samples(512, 0.8);
  LineProfile prof(20.0, samples, TailModel::step(0.8, 0.8), 1e-12);
  auto vals = apply_line(prof, half_laplacian_kernel(), {-3.3, 0.0, 7.1});
  for (double v : vals) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("evaluation too close to the boundary is rejected") {
  std::vector<double> samples(128, 0.0);
  LineProfile prof(10.0, samples, TailModel::zero(), 0.05);
  CHECK_THROWS_AS(apply_line(prof, half_laplacian_kernel(), {9.5}), std::invalid_argument);
}

TEST_CASE("order-1 scaling: I1[phi_a](x) = (1/a) I1[phi](x/a)") {
  const LevyKernel1D half = half_laplacian_kernel();
  const double a = 2.5;
  LayerProfile base = make_closed_form_layer(60.0, 4097);
  // phi_a(x) = phi(x/a) sampled on a stretched domain.
  const int N = 4097;
  const double Ra = 60.0 * a;
  std::vector<double> scaled(N);
  for (int i = 0; i < N; ++i) {
    const double x = -Ra + i * 2.0 * Ra / (N - 1);
    scaled[i] = closed_form_layer(x / a).value;
  }
  LineProfile prof_a(Ra, scaled, TailModel::step(0.0, 1.0, -a / kPi), 0.01);
  for (double x : {0.0, 1.0, -2.2, 5.0}) {
    const double lhs = apply_line(prof_a, half, {x})[0];
    const double rhs = apply_line(base.profile(), half, {x / a})[0] / a;
    CHECK(lhs == doctest::Approx(rhs).epsilon(5e-3));
  }
}

TEST_CASE("zero-tail matrix agrees with the node apply") {
  const int N = 257;
  const double R = 10.0;
  const LevyKernel1D half = half_laplacian_kernel();
  std::vector<double> samples(N);
  for (int i = 0; i < N; ++i) {
    const double x = -R + i * 2.0 * R / (N - 1);
    samples[i] = std::exp(-x * x / 4.0);
  }
  LineProfile prof(R, samples, TailModel::zero(), 0.05);
  std::vector<double> direct = line_apply_nodes(prof, half);
  std::vector<double> A = line_operator_matrix(R, N, half);
  for (int i = 0; i < N; ++i) {
    double ai = 0.0;
    for (int j = 0; j < N; ++j) ai += A[static_cast<std::size_t>(i) * N + j] * samples[j];
    CHECK(ai == doctest::Approx(direct[i]).epsilon(1e-10));
  }
}

}  // TEST_SUITE
