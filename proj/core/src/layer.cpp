#include "pnlab/layer.hpp"

#include <algorithm>
#include <cmath>

namespace pnlab {
namespace {

// Least-squares fit of f ~ K/x^2 on |x| in [R/4, R/2] (both sides).
double fit_inverse_square(const LineProfile& profile, const std::vector<double>& samples) {
  const double R = profile.radius();
  double num = 0.0, den = 0.0;
  for (int i = 0; i < profile.nodes(); ++i) {
    const double x = profile.node(i);
    const double ax = std::abs(x);
    if (ax < R / 4.0 || ax > R / 2.0) continue;
    const double basis = 1.0 / (x * x);
    num += samples[i] * basis;
    den += basis * basis;
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

EvalTriple closed_form_layer(double x) {
  const double den = 1.0 + x * x;
  return EvalTriple{0.5 + std::atan(x) / kPi, 1.0 / (kPi * den), -2.0 * x / (kPi * den * den)};
}

LayerProfile::LayerProfile(LineProfile phi, std::vector<double> dphi, std::vector<double> d2phi,
                           double alpha, bool closed_form)
    : phi_(std::move(phi)), dphi_(std::move(dphi)), d2phi_(std::move(d2phi)), alpha_(alpha),
      closed_form_(closed_form), tail_K_(0.0) {
  const int N = phi_.nodes();
  if (static_cast<int>(dphi_.size()) != N || static_cast<int>(d2phi_.size()) != N) {
    throw std::invalid_argument("LayerProfile: derivative sample counts differ from phi");
  }
  const std::vector<double>& u = phi_.samples();
  for (int i = 0; i + 1 < N; ++i) {
    if (!(u[i + 1] > u[i])) throw std::invalid_argument("LayerProfile: profile not strictly increasing");
  }
  if (!(u.front() > 0.0) || !(u.back() < 1.0)) {
    throw std::invalid_argument("LayerProfile: values leave (0, 1)");
  }
  const double mid = phi_.value(0.0);
  if (std::abs(mid - 0.5) > 2.0 * phi_.spacing()) {
    throw std::invalid_argument("LayerProfile: phi(0) != 1/2 beyond grid tolerance");
  }
  tail_K_ = fit_inverse_square(phi_, dphi_);
}

double LayerProfile::value(double x) const {
  if (closed_form_) return closed_form_layer(x).value;
  return phi_.value(x);
}

double LayerProfile::deriv(double x) const {
  if (closed_form_) return closed_form_layer(x).first;
  if (std::abs(x) > phi_.radius()) return tail_K_ / (x * x);
  LineProfile tmp(phi_.radius(), dphi_, TailModel::algebraic(0.0), 1e9);
  return tmp.value(x);
}

double LayerProfile::deriv2(double x) const {
  if (closed_form_) return closed_form_layer(x).second;
  if (std::abs(x) > phi_.radius()) return -2.0 * tail_K_ / (x * x * x);
  LineProfile tmp(phi_.radius(), d2phi_, TailModel::algebraic(0.0), 1e9);
  return tmp.value(x);
}

LayerProfile make_closed_form_layer(double R, int nodes) {
  const double h = 2.0 * R / (nodes - 1);
  std::vector<double> phi(nodes), dphi(nodes), d2phi(nodes);
  for (int i = 0; i < nodes; ++i) {
    const EvalTriple t = closed_form_layer(-R + i * h);
    phi[i] = t.value;
    dphi[i] = t.first;
    d2phi[i] = t.second;
  }
  LineProfile profile(R, std::move(phi), TailModel::step(0.0, 1.0, -1.0 / kPi), 0.01);
  return LayerProfile(std::move(profile), std::move(dphi), std::move(d2phi), 1.0, true);
}

LayerProfile solve_layer(const PeriodicPotential& pot, double R, int nodes,
                         const LevyKernel1D& kernel, const LayerSolveOptions& options) {
  if (!pot.is_W_class()) {
    throw std::invalid_argument("solve_layer: potential is not in the (W) class (needs W > 0 on (0,1), alpha > 0)");
  }
  const double alpha = pot.alpha();
  const double h = 2.0 * R / (nodes - 1);
  const TailModel tail = TailModel::step(0.0, 1.0, -1.0 / (alpha * kPi));

  // Initial guess: the closed-form arctan layer (right topology and tails).
  std::vector<double> u(nodes);
  for (int i = 0; i < nodes; ++i) u[i] = closed_form_layer(-R + i * h).value;

  // Explicit Euler; the operator diagonal bounds the stable step.
  const int m_r = static_cast<int>(std::floor(kernel.r / h));
  double diag = 0.0;
  for (int m = 1; m <= m_r; ++m) {
    const double w = (m == 1) ? 1.5 * h : (m == m_r ? 0.5 * h : h);
    diag += 2.0 * w / (m * m * h * h);
  }
  for (int m = m_r; m <= nodes - 1; ++m) diag += 2.0 * h / (m * m * h * h);
  diag = kernel.g0 * (diag + 2.0 / (m_r * h));
  const double dt = options.dt_safety / (diag + pot.sup_d2W());

  double residual = 1e300;
  int iter = 0;
  std::vector<double> rate(nodes);
  while (true) {
    LineProfile current(R, u, tail, 0.05);
    const std::vector<double> i1 = line_apply_nodes(current, kernel);
    residual = 0.0;
    for (int i = 0; i < nodes; ++i) {
      rate[i] = i1[i] - pot.dW(u[i]);
      residual = std::max(residual, std::abs(rate[i]));
    }
    if (residual <= options.residual_target) break;
    if (iter >= options.max_iterations) {
      throw std::runtime_error("solve_layer: no convergence within iteration budget (residual " +
                               std::to_string(residual) + ")");
    }
    for (int i = 0; i < nodes; ++i) u[i] += dt * rate[i];
    ++iter;
  }

  // Recenter so phi(0) = 1/2 (monotone interpolation of the crossing).
  LineProfile relaxed(R, u, tail, 0.05);
  int j = 0;
  while (j + 1 < nodes && u[j + 1] < 0.5) ++j;
  const double xj = -R + j * h;
  const double shift = xj + h * (0.5 - u[j]) / (u[j + 1] - u[j]);
  std::vector<double> centered(nodes), dphi(nodes), d2phi(nodes);
  for (int i = 0; i < nodes; ++i) centered[i] = relaxed.value(-R + i * h + shift);
  // Monotone repair of rounding-level flats, then derivatives by central
  // differences (tail values beyond the edges).
  for (int i = 1; i < nodes; ++i) {
    if (centered[i] <= centered[i - 1]) centered[i] = std::nextafter(centered[i - 1], 1.0);
  }
  LineProfile final_profile(R, centered, tail, 0.05);
  auto at = [&](int i) {
    if (i < 0 || i >= nodes) return tail.value(-R + i * h);
    return centered[i];
  };
  for (int i = 0; i < nodes; ++i) {
    dphi[i] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
    d2phi[i] = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) - at(i - 2)) /
               (12.0 * h * h);
  }
  return LayerProfile(std::move(final_profile), std::move(dphi), std::move(d2phi), alpha, false);
}

C0Report compute_c0_report(const LayerProfile& layer) {
  const int N = layer.nodes();
  const double h = layer.spacing();
  const std::vector<double>& dphi = layer.dphi();
  for (int i = 0; i < N; ++i) {
    if (!(dphi[i] > 0.0)) {
      throw std::invalid_argument("compute_c0: degenerate layer, phi' <= 0 at node " + std::to_string(i));
    }
  }
  double integral = 0.0;
  for (int i = 0; i < N; ++i) {
    const double w = (i == 0 || i == N - 1) ? 0.5 * h : h;
    integral += w * dphi[i] * dphi[i];
  }
  // Tail from the fitted algebraic model phi' ~ K/x^2:
  // int_R^inf (K/x^2)^2 dx per side = K^2/(3 R^3).
  const double K = layer.tail_coefficient();
  const double R = layer.radius();
  integral += 2.0 * K * K / (3.0 * R * R * R);
  return C0Report{1.0 / integral, integral, K, 1.0 / (layer.alpha() * kPi)};
}

double compute_c0(const LayerProfile& layer) { return compute_c0_report(layer).c0; }

}  // namespace pnlab
