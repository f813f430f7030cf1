// Layer (dislocation transition) profiles: the closed-form solution for the
// sinusoidal potential, relaxation for general (W)-class potentials, and the
// mobility constant c0 = (int (phi')^2)^{-1}.
#pragma once

#include <vector>

#include "pnlab/line_profile.hpp"
#include "pnlab/potential.hpp"

namespace pnlab {

// phi, phi', phi'' of the closed-form layer 1/2 + arctan(x)/pi, which solves
// I1[phi] = W'(phi) for the default sinusoidal potential.
EvalTriple closed_form_layer(double x);

// Monotone transition connecting 0 to 1 with phi(0) = 1/2. Carries sampled
// phi, phi', phi'' on [-R, R], a step(0,1) tail with the recorded algebraic
// correction -1/(alpha pi x), and the fitted Lemma-type envelope constants.
class LayerProfile {
 public:
  LayerProfile(LineProfile phi, std::vector<double> dphi, std::vector<double> d2phi,
               double alpha, bool closed_form);

  const LineProfile& profile() const { return phi_; }
  double radius() const { return phi_.radius(); }
  int nodes() const { return phi_.nodes(); }
  double spacing() const { return phi_.spacing(); }
  double node(int i) const { return phi_.node(i); }
  double alpha() const { return alpha_; }
  bool closed_form() const { return closed_form_; }

  // phi extended by the tail model; exact formulas when closed_form.
  double value(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;

  const std::vector<double>& dphi() const { return dphi_; }
  const std::vector<double>& d2phi() const { return d2phi_; }

  // Fitted tail coefficient K with phi' ~ K/x^2 (theory: 1/(alpha pi)).
  double tail_coefficient() const { return tail_K_; }

 private:
  LineProfile phi_;
  std::vector<double> dphi_;
  std::vector<double> d2phi_;
  double alpha_;
  bool closed_form_;
  double tail_K_;
};

LayerProfile make_closed_form_layer(double R, int nodes);

struct LayerSolveOptions {
  double residual_target = 1e-5;
  int max_iterations = 200000;
  double dt_safety = 0.8;
};

// Relaxes d_t phi = I1[phi] - W'(phi) from the arctan ramp until the
// sup-residual drops below the target, then recenters so phi(0) = 1/2.
// Throws for non-(W)-class potentials and on iteration budget exhaustion.
LayerProfile solve_layer(const PeriodicPotential& pot, double R, int nodes,
                         const LevyKernel1D& kernel = half_laplacian_kernel(),
                         const LayerSolveOptions& options = {});

// c0 = 1 / int (phi')^2: trapezoid on [-R, R] plus the analytic tail from
// the fitted algebraic coefficient. Throws if phi' <= 0 anywhere.
double compute_c0(const LayerProfile& layer);

struct C0Report {
  double c0;
  double integral;         // int (phi')^2 including tail correction
  double tail_fitted;      // fitted K in phi' ~ K/x^2
  double tail_theoretical; // 1/(alpha pi)
};

C0Report compute_c0_report(const LayerProfile& layer);

}  // namespace pnlab
