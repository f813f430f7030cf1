// Truncated-line profiles with analytic far-field tails and the Levy
// operator on them (pointwise evaluation, node evaluation, dense matrix).
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pnlab/levy.hpp"

namespace pnlab {

// Behavior assumed for |x| > R. Step carries the two limits; Algebraic is a
// K/x tail; Zero vanishes. A Step tail may carry an algebraic correction
// coefficient K so that the extended value is l(+-) + K/x (used by layer
// profiles, where phi ~ H(x) - 1/(alpha pi x)).
struct TailModel {
  enum class Kind { Step, Algebraic, Zero };
  Kind kind = Kind::Zero;
  double left = 0.0;    // l^- (Step only)
  double right = 0.0;   // l^+ (Step only)
  double coeff = 0.0;   // K (Algebraic, or Step correction)

  static TailModel step(double l_minus, double l_plus, double correction = 0.0) {
    TailModel t;
    t.kind = Kind::Step;
    t.left = l_minus;
    t.right = l_plus;
    t.coeff = correction;
    return t;
  }
  static TailModel algebraic(double K) {
    TailModel t;
    t.kind = Kind::Algebraic;
    t.coeff = K;
    return t;
  }
  static TailModel zero() { return TailModel{}; }

  double value(double x) const {
    switch (kind) {
      case Kind::Step: return (x >= 0.0 ? right : left) + (coeff != 0.0 ? coeff / x : 0.0);
      case Kind::Algebraic: return coeff / x;
      case Kind::Zero: return 0.0;
    }
    return 0.0;
  }
};

// Uniform samples of a whole-line function on [-R, R] (nodes x_i = -R + i*h,
// h = 2R/(count-1)) plus the tail model describing it beyond R.
class LineProfile {
 public:
  LineProfile(double R, std::vector<double> samples, TailModel tail,
              double tail_envelope = 0.05);

  double radius() const { return R_; }
  int nodes() const { return static_cast<int>(samples_.size()); }
  double spacing() const { return 2.0 * R_ / (nodes() - 1); }
  double node(int i) const { return -R_ + i * spacing(); }
  const std::vector<double>& samples() const { return samples_; }
  const TailModel& tail() const { return tail_; }

  // Cubic interpolation inside [-R, R], tail model outside.
  double value(double x) const;

 private:
  double R_;
  std::vector<double> samples_;
  TailModel tail_;
};

// I1 evaluated at the profile's own nodes; the quadrature uses the stored
// samples inside [-R, R] and the tail model analytically outside. O(n log n)
// via a Toeplitz convolution.
std::vector<double> line_apply_nodes(const LineProfile& profile, const LevyKernel1D& kernel);

// I1 at arbitrary points x (each at least r from the truncation boundary).
std::vector<double> apply_line(const LineProfile& profile, const LevyKernel1D& kernel,
                               const std::vector<double>& x);

// Dense matrix A with (A u)_i = I1[u](x_i) under the zero-tail convention
// (u == 0 outside [-R, R]); rows match line_apply_nodes with a Zero tail.
// n x n with n = nodes; row-major.
std::vector<double> line_operator_matrix(double R, int nodes, const LevyKernel1D& kernel);

}  // namespace pnlab
