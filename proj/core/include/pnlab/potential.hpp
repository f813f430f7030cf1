// Periodic misfit potentials (finite cosine series) and doubly periodic
// forcings, with certified sup-norm bounds.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnlab/common.hpp"

namespace pnlab {

// W(v) = sum_m b_m (1 - cos(2 pi m v)), m = 1..M. Exactly 1-periodic with
// W(0) = 0; derivatives are exact series. alpha = W''(0) = sum b_m (2 pi m)^2.
// The default single-mode b_1 = 1/(4 pi^2) gives W'(v) = sin(2 pi v)/(2 pi)
// and alpha = 1.
class PeriodicPotential {
 public:
  explicit PeriodicPotential(std::vector<double> cosine_coefficients);

  static PeriodicPotential sinusoidal_default() {
    return PeriodicPotential({1.0 / (4.0 * kPi * kPi)});
  }

  const std::vector<double>& coefficients() const { return b_; }
  double alpha() const { return alpha_; }

  double W(double v) const;
  double dW(double v) const;
  double d2W(double v) const;
  double d3W(double v) const;

  // Certified upper bounds (dense sampling + Lipschitz padding from the
  // analytic series bound on the next derivative).
  double sup_dW() const { return sup_dW_; }
  double sup_d2W() const { return sup_d2W_; }

  // The (W)-class flag: W > 0 on (0,1) and alpha > 0, verified by sampling.
  bool is_W_class() const { return w_class_; }

  std::uint64_t hash() const;

 private:
  std::vector<double> b_;
  double alpha_ = 0.0;
  double sup_dW_ = 0.0;
  double sup_d2W_ = 0.0;
  bool w_class_ = false;
};

struct EvalTriple {
  double value;
  double first;
  double second;
};

// (W, W', W'') at v; exact series evaluation.
EvalTriple eval_potential(const PeriodicPotential& pot, double v);

// sigma(tau, y) = sum a cos(2 pi (j tau + k y) + theta) with integer j, k,
// so sigma(tau+1, y) = sigma(tau, y) and sigma(tau, y+1) = sigma(tau, y)
// bit-exactly (arguments are wrapped to [0,1) before the trig call).
class Forcing {
 public:
  struct Mode {
    int j = 0;       // time frequency
    int k = 0;       // space frequency
    double a = 0.0;  // amplitude
    double theta = 0.0;
  };

  Forcing() = default;
  explicit Forcing(std::vector<Mode> modes);

  static Forcing zero() { return Forcing(); }

  const std::vector<Mode>& modes() const { return modes_; }
  bool empty() const { return modes_.empty(); }

  double eval(double tau, double y) const;

  double sup() const { return sup_; }        // sum |a|
  double lipschitz() const { return lip_; }  // space-time Lipschitz bound

  bool even_in_y() const;  // sigma(tau,-y) == sigma(tau,y), verified by sampling
  bool odd_in_y() const;   // sigma(tau,-y) == -sigma(tau,y)

  std::uint64_t hash() const;

 private:
  std::vector<Mode> modes_;
  double sup_ = 0.0;
  double lip_ = 0.0;
};

double eval_forcing(const Forcing& f, double tau, double y);

}  // namespace pnlab
