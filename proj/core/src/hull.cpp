#include "pnlab/hull.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace pnlab {
namespace {

// Two-parameter fit psi ~ a/x + b/x^2 over |x| in [lo, hi]; returns a (the
// K2 estimate, stable when the true 1/x component vanishes).
double fit_tail_coefficient(const LineProfile& psi, double lo, double hi) {
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, r1 = 0.0, r2 = 0.0;
  for (int i = 0; i < psi.nodes(); ++i) {
    const double x = psi.node(i);
    const double ax = std::abs(x);
    if (ax < lo || ax > hi) continue;
    const double f1 = 1.0 / x;
    const double f2 = 1.0 / (x * x);
    const double v = psi.samples()[i];
    s11 += f1 * f1;
    s12 += f1 * f2;
    s22 += f2 * f2;
    r1 += f1 * v;
    r2 += f2 * v;
  }
  const double det = s11 * s22 - s12 * s12;
  if (std::abs(det) < 1e-30) return 0.0;
  return (r1 * s22 - r2 * s12) / det;
}

// I1[phi](z) through the layer equation I1[phi] = W'(phi).
double i1_phi(const LayerProfile& layer, const PeriodicPotential& pot, double z) {
  return pot.dW(layer.value(z));
}

}  // namespace

PsiProfile::PsiProfile(LineProfile psi, std::vector<double> dpsi, std::vector<double> d2psi,
                       std::vector<double> i1psi, double c, double K2, double K3, double L0,
                       double alpha)
    : psi_(psi),
      dpsi_(psi.radius(), std::move(dpsi), TailModel::zero(), 1e9),
      d2psi_(psi.radius(), std::move(d2psi), TailModel::zero(), 1e9),
      i1psi_(psi.radius(), std::move(i1psi), TailModel::zero(), 1e9),
      c_(c), K2_(K2), K3_(K3), L0_(L0), alpha_(alpha) {}

double PsiProfile::value(double x) const {
  if (std::abs(x) <= psi_.radius()) return psi_.value(x);
  return K2_ / x;
}

double PsiProfile::deriv(double x) const {
  if (std::abs(x) <= psi_.radius()) return dpsi_.value(x);
  return -K2_ / (x * x);
}

double PsiProfile::deriv2(double x) const {
  if (std::abs(x) <= psi_.radius()) return d2psi_.value(x);
  return 2.0 * K2_ / (x * x * x);
}

double PsiProfile::i1(double x, const LayerProfile& layer, const PeriodicPotential& pot) const {
  if (std::abs(x) <= 0.9 * psi_.radius()) return i1psi_.value(x);
  // Equation form, valid everywhere: W''(phi) psi + (L0/alpha)(W''(phi) -
  // alpha) + c phi'.
  const double w2 = pot.d2W(layer.value(x));
  return w2 * value(x) + (L0_ / alpha_) * (w2 - alpha_) + c_ * layer.deriv(x);
}

namespace {

struct PsiSystemSolution {
  std::vector<double> psi;
  double mu = 0.0;
  double equation_residual = 0.0;  // ||A psi - rhs||_inf (unaugmented)
  double augmented_residual = 0.0; // ||A psi + mu phi' - rhs||_inf
  double c = 0.0;
};

PsiSystemSolution solve_psi_system(const LayerProfile& layer, const PeriodicPotential& pot,
                                   double L0, double eps_perturb, const LevyKernel1D& kernel) {
  const int N = layer.nodes();
  const double R = layer.radius();
  const double alpha = pot.alpha();
  const double c = L0 * compute_c0(layer);

  std::vector<double> Araw = line_operator_matrix(R, N, kernel);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N + 1, N + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N + 1);
  const std::vector<double>& dphi = layer.dphi();
  for (int i = 0; i < N; ++i) {
    const double phi_i = layer.profile().samples()[i];
    const double w2 = pot.d2W(phi_i);
    for (int j = 0; j < N; ++j) M(i, j) = Araw[static_cast<std::size_t>(i) * N + j];
    M(i, i) -= w2;
    M(i, N) = dphi[i];
    M(N, i) = dphi[i];
    rhs(i) = (L0 / alpha) * (w2 - alpha) + c * dphi[i] + eps_perturb * dphi[i];
  }

  Eigen::VectorXd sol = M.partialPivLu().solve(rhs);
  if (!sol.allFinite()) throw std::runtime_error("solve_psi: singular augmented system");

  PsiSystemSolution out;
  out.psi.assign(N, 0.0);
  for (int i = 0; i < N; ++i) out.psi[i] = sol(i);
  out.mu = sol(N);
  out.c = c;
  for (int i = 0; i < N; ++i) {
    double Ai = 0.0;
    for (int j = 0; j < N; ++j) Ai += M(i, j) * out.psi[j];
    const double req = Ai - rhs(i);  // unaugmented equation residual
    const double raug = req + out.mu * dphi[i];
    out.equation_residual = std::max(out.equation_residual, std::abs(req));
    out.augmented_residual = std::max(out.augmented_residual, std::abs(raug));
  }
  return out;
}

}  // namespace

PsiProfile solve_psi(const LayerProfile& layer, const PeriodicPotential& pot, double L0,
                     const LevyKernel1D& kernel, const PsiSolveOptions& options) {
  const int N = layer.nodes();
  const double R = layer.radius();
  const double h = layer.spacing();
  const PsiSystemSolution sys = solve_psi_system(layer, pot, L0, 0.0, kernel);
  if (sys.augmented_residual > options.residual_target) {
    throw std::runtime_error("solve_psi: augmented solve residual " +
                             std::to_string(sys.augmented_residual) + " misses target");
  }
  // Gauge check <psi, phi'> = 0 (trapezoid inner product).
  double orth = 0.0;
  for (int i = 0; i < N; ++i) {
    const double w = (i == 0 || i == N - 1) ? 0.5 * h : h;
    orth += w * sys.psi[i] * layer.dphi()[i];
  }
  if (std::abs(orth) > options.orthogonality_tol * (1.0 + std::abs(L0))) {
    throw std::runtime_error("solve_psi: orthogonality <psi, phi'> = " + std::to_string(orth));
  }

  LineProfile psi_tmp(R, sys.psi, TailModel::algebraic(0.0), 1e9);
  const double K2 = fit_tail_coefficient(psi_tmp, R / 4.0, R / 2.0);
  LineProfile psi_profile(R, sys.psi, TailModel::algebraic(K2), 0.05);

  // Derivatives by five-point central differences, tail values past the
  // edges.
  auto at = [&](int i) {
    if (i >= 0 && i < N) return sys.psi[i];
    const double x = -R + i * h;
    return K2 / x;
  };
  std::vector<double> dpsi(N), d2psi(N);
  for (int i = 0; i < N; ++i) {
    dpsi[i] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
    d2psi[i] = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) - at(i - 2)) /
               (12.0 * h * h);
  }
  const std::vector<double> i1psi = line_apply_nodes(psi_profile, kernel);

  // K3: pinned factor 2 over the fit-window maxima of the Lemma-type
  // quantities; decay_checks verifies the envelopes globally.
  double k3 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = psi_profile.node(i);
    const double ax = std::abs(x);
    if (ax < R / 4.0 || ax > R / 2.0) continue;
    k3 = std::max(k3, std::abs(sys.psi[i] - K2 / x) * x * x);
    k3 = std::max(k3, std::abs(dpsi[i]) * (1.0 + x * x));
    k3 = std::max(k3, std::abs(d2psi[i]) * (1.0 + x * x));
  }
  const double K3 = 2.0 * k3;
  return PsiProfile(std::move(psi_profile), std::move(dpsi), std::move(d2psi),
                    std::move(i1psi), sys.c, K2, K3, L0, pot.alpha());
}

double psi_equation_residual(const LayerProfile& layer, const PeriodicPotential& pot, double L0,
                             double eps_perturb, const LevyKernel1D& kernel) {
  return solve_psi_system(layer, pot, L0, eps_perturb, kernel).equation_residual;
}

LatticeSums lattice_sums(double x, long long n) {
  const long long i0 = static_cast<long long>(std::ceil(x - 0.5));
  const double gamma = x - static_cast<double>(i0);
  if (n <= std::llabs(i0)) {
    throw std::invalid_argument("lattice_sums: need n > |i0| (n = " + std::to_string(n) +
                                ", i0 = " + std::to_string(i0) + ")");
  }
  LatticeSums out;
  out.i0 = i0;
  out.gamma = gamma;

  // S1 paired about i0: exact cancellation of the symmetric sum at gamma=0.
  const long long j_right = n - i0;  // largest j with i0 + j <= n
  const long long j_left = n + i0;   // largest j with i0 - j >= -n
  const long long j_both = std::min(j_right, j_left);
  for (long long j = 1; j <= j_both; ++j) {
    out.S1 += 1.0 / (gamma - static_cast<double>(j)) + 1.0 / (gamma + static_cast<double>(j));
  }
  for (long long j = j_both + 1; j <= j_right; ++j) out.S1 += 1.0 / (gamma - static_cast<double>(j));
  for (long long j = j_both + 1; j <= j_left; ++j) out.S1 += 1.0 / (gamma + static_cast<double>(j));

  // S2 = sum_{j=1}^{n+i0} 1/(j+gamma)^2, S3 = sum_{j=1}^{n-i0} 1/(j-gamma)^2.
  for (long long j = 1; j <= j_left; ++j) {
    const double d = static_cast<double>(j) + gamma;
    out.S2 += 1.0 / (d * d);
  }
  for (long long j = 1; j <= j_right; ++j) {
    const double d = static_cast<double>(j) - gamma;
    out.S3 += 1.0 / (d * d);
  }

  // Limits: cotangent identity and polygamma-type tails by accelerated
  // partial summation (Euler-Maclaurin through the 1/a^3 term).
  if (gamma == 0.0) {
    out.S1_limit = 0.0;
  } else if (std::abs(gamma) < 1e-2) {
    const double g2 = gamma * gamma;
    out.S1_limit = -gamma * (kPi * kPi / 3.0 + g2 * (std::pow(kPi, 4) / 45.0 + g2 * 2.0 * std::pow(kPi, 6) / 945.0));
  } else {
    out.S1_limit = kPi / std::tan(kPi * gamma) - 1.0 / gamma;
  }
  auto trigamma_tail = [](double g) {
    const long long M = 20000;
    double s = 0.0;
    for (long long j = 1; j <= M; ++j) {
      const double d = static_cast<double>(j) + g;
      s += 1.0 / (d * d);
    }
    const double a = static_cast<double>(M + 1) + g;
    return s + 1.0 / a + 1.0 / (2.0 * a * a) + 1.0 / (6.0 * a * a * a);
  };
  out.S2_limit = trigamma_tail(gamma);
  out.S3_limit = trigamma_tail(-gamma);
  return out;
}

void AnsatzParams::validate() const {
  if (!(delta > 0.0) || p0 == 0.0) throw std::invalid_argument("AnsatzParams: need delta > 0, p0 != 0");
  if (n_trunc < 1) throw std::invalid_argument("AnsatzParams: truncation n must be >= 1");
  if (1.0 / (delta * std::abs(p0)) < 2.0) {
    throw std::invalid_argument("AnsatzParams: standing assumption 1/(delta |p0|) >= 2 violated");
  }
  if (layer == nullptr) throw std::invalid_argument("AnsatzParams: layer missing");
  if (psi == nullptr && L != 0.0) throw std::invalid_argument("AnsatzParams: psi profile missing for L != 0");
  if (!(alpha > 0.0) || !(c0 > 0.0)) throw std::invalid_argument("AnsatzParams: need alpha, c0 > 0");
}

AnsatzSums ansatz_term_sums(const AnsatzParams& params, const PeriodicPotential& pot, double x,
                            bool want_i1) {
  params.validate();
  const double a = params.scale();
  AnsatzSums sums;
  for (int i = -params.n_trunc; i <= params.n_trunc; ++i) {
    const double xi = (x - static_cast<double>(i)) / a;
    sums.phi += params.layer->value(xi);
    sums.dphi += params.layer->deriv(xi);
    sums.d2phi += params.layer->deriv2(xi);
    if (want_i1) sums.i1phi += i1_phi(*params.layer, pot, xi);
    if (params.psi != nullptr) {
      sums.psi += params.psi->value(xi);
      sums.dpsi += params.psi->deriv(xi);
      sums.d2psi += params.psi->deriv2(xi);
      if (want_i1) sums.i1psi += params.psi->i1(xi, *params.layer, pot);
    }
  }
  return sums;
}

AnsatzValue eval_ansatz(const AnsatzParams& params, double x) {
  static const PeriodicPotential default_pot = PeriodicPotential::sinusoidal_default();
  const AnsatzSums sums = ansatz_term_sums(params, default_pot, x, /*want_i1=*/false);
  const double a = params.scale();
  AnsatzValue v;
  v.s = params.L * params.delta / params.alpha - params.n_trunc + sums.phi + params.delta * sums.psi;
  v.ds = (sums.dphi + params.delta * sums.dpsi) / a;
  v.d2s = (sums.d2phi + params.delta * sums.d2psi) / (a * a);
  return v;
}

ResidualReport residual(const AnsatzParams& params, const PeriodicPotential& pot,
                        const std::vector<double>& xs) {
  params.validate();
  ResidualReport report;
  report.x = xs;
  report.values.resize(xs.size());
  report.delta = params.delta;
  report.n_trunc = params.n_trunc;
  report.lambda_bar = params.lambda_bar();
  const double a = params.scale();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const AnsatzSums sums = ansatz_term_sums(params, pot, xs[k]);
    const double s = params.L * params.delta / params.alpha - params.n_trunc + sums.phi +
                     params.delta * sums.psi;
    const double ds = (sums.dphi + params.delta * sums.dpsi) / a;
    // delta |p0| I1[s] = sum I1[phi](x_i) + delta sum I1[psi](x_i)
    const double i1s_scaled = sums.i1phi + params.delta * sums.i1psi;
    const double nl = report.lambda_bar * ds - i1s_scaled + pot.dW(s) - params.delta * params.L;
    report.values[k] = nl;
    report.sup = std::max(report.sup, std::abs(nl));
  }
  return report;
}

DecayReport decay_checks(const LayerProfile& layer, const PsiProfile* psi) {
  DecayReport report;
  const double R = layer.radius();
  const double alpha = layer.alpha();

  auto heaviside = [](double x) { return x >= 0.0 ? 1.0 : 0.0; };
  // Fit window [R/4, R/2], verification window [1, R/2].
  double k1_fit = 0.0, k0_fit = 1e300;
  for (int i = 0; i < layer.nodes(); ++i) {
    const double x = layer.node(i);
    const double ax = std::abs(x);
    if (ax < R / 4.0 || ax > R / 2.0) continue;
    const double t1 = std::abs(layer.value(x) - heaviside(x) + 1.0 / (alpha * kPi * x)) * x * x;
    const double t2 = layer.deriv(x) * (1.0 + x * x);
    const double t3 = std::abs(layer.deriv2(x)) * (1.0 + x * x);
    k1_fit = std::max({k1_fit, t1, t2, t3});
    k0_fit = std::min(k0_fit, t2);
  }
  report.K1 = 2.0 * k1_fit;
  report.K0 = 0.5 * k0_fit;

  report.phi_ok = true;
  double worst_phi = -1e300;
  for (int i = 0; i < layer.nodes(); ++i) {
    const double x = layer.node(i);
    const double ax = std::abs(x);
    if (ax < 1.0 || ax > R / 2.0) continue;
    const double t1 = std::abs(layer.value(x) - heaviside(x) + 1.0 / (alpha * kPi * x)) * x * x;
    const double t2 = layer.deriv(x) * (1.0 + x * x);
    const double t3 = std::abs(layer.deriv2(x)) * (1.0 + x * x);
    worst_phi = std::max({worst_phi, t1 - report.K1, t3 - report.K1, t2 - report.K1,
                          report.K0 - t2});
  }
  report.worst_phi_violation = worst_phi;
  report.phi_ok = worst_phi <= 0.0;

  if (psi == nullptr) {
    report.psi_ok = true;
    report.worst_psi_violation = 0.0;
    return report;
  }

  report.K2 = fit_tail_coefficient(psi->profile(), R / 4.0, R / 2.0);
  report.K2_alt = fit_tail_coefficient(psi->profile(), R / 8.0, R / 4.0);
  double k3_fit = 0.0;
  for (int i = 0; i < psi->profile().nodes(); ++i) {
    const double x = psi->profile().node(i);
    const double ax = std::abs(x);
    if (ax < R / 4.0 || ax > R / 2.0) continue;
    const double q1 = std::abs(psi->value(x) - report.K2 / x) * x * x;
    const double q2 = std::abs(psi->deriv(x)) * (1.0 + x * x);
    const double q3 = std::abs(psi->deriv2(x)) * (1.0 + x * x);
    k3_fit = std::max({k3_fit, q1, q2, q3});
  }
  report.K3 = 2.0 * k3_fit;

  double worst_psi = -1e300;
  for (int i = 0; i < psi->profile().nodes(); ++i) {
    const double x = psi->profile().node(i);
    const double ax = std::abs(x);
    if (ax < 1.0 || ax > R / 2.0) continue;
    const double q1 = std::abs(psi->value(x) - report.K2 / x) * x * x;
    const double q2 = std::abs(psi->deriv(x)) * (1.0 + x * x);
    const double q3 = std::abs(psi->deriv2(x)) * (1.0 + x * x);
    worst_psi = std::max({worst_psi, q1 - report.K3, q2 - report.K3, q3 - report.K3});
  }
  report.worst_psi_violation = worst_psi;
  report.psi_ok = worst_psi <= 0.0;
  return report;
}

}  // namespace pnlab
