// Order-1 Levy operator on periodic grids: Fourier symbol, spectral
// (circulant) application, and direct split quadrature for cross-validation.
#pragma once

#include <stdexcept>
#include <vector>

#include "pnlab/grid.hpp"

namespace pnlab {

// Strength g0 and split radius r of the 1-D order-1 Levy operator
//   I1[u](x) = int (u(x+z) - u(x) - u'(x) z 1_{|z|<=r}) g0/|z|^2 dz.
// g0 = 1/pi reproduces -(-Laplace)^{1/2}.
struct LevyKernel1D {
  double g0 = 1.0 / kPi;
  double r = 1.0;

  LevyKernel1D() = default;
  LevyKernel1D(double g0_in, double r_in) : g0(g0_in), r(r_in) {
    if (!(g0 > 0.0)) throw std::invalid_argument("LevyKernel1D: g0 must be > 0");
    if (!(r > 0.0)) throw std::invalid_argument("LevyKernel1D: split radius must be > 0");
  }
};

inline LevyKernel1D half_laplacian_kernel(double r = 1.0) { return LevyKernel1D(1.0 / kPi, r); }

// Fourier multiplier of I1 on a period-Lambda cell at integer wavenumber k:
//   m(k) = -pi * g0 * |2 pi k / Lambda|.
// The prefactor pi*g0 is the 1-D normalization making g0 = 1/pi match the
// half-Laplacian symbol -|xi|.
double levy_symbol(int k, const LevyKernel1D& kernel, double period);

// Periodic spectral application of I1, precomputed as a circulant stencil.
// The stencil is the inverse DFT of the symbol; off-diagonal entries are
// nonnegative (discrete jump kernel), which the constructor verifies.
// Application sums in fixed offset order, so shifting the input by one node
// shifts the output by one node bit-exactly.
class LevyOperator1D {
 public:
  LevyOperator1D(const PeriodicGrid& grid, const LevyKernel1D& kernel);

  const PeriodicGrid& grid() const { return grid_; }
  const LevyKernel1D& kernel() const { return kernel_; }
  const std::vector<double>& stencil() const { return stencil_; }

  ScalarField apply(const ScalarField& field) const;

 private:
  PeriodicGrid grid_;
  LevyKernel1D kernel_;
  std::vector<double> stencil_;  // circulant row, index = offset
};

// One-shot conveniences over LevyOperator1D / direct quadrature.
ScalarField apply_spectral(const ScalarField& field, const LevyKernel1D& kernel);

// Direct split evaluation: symmetric second-difference quadrature of the
// inner integral, trapezoid over periodic images out to a 50-period cutoff,
// analytic remainder (mean(u) - u(x)) * 2 g0 / cutoff added. Requires
// r >= 2h so the inner integral is resolvable.
ScalarField apply_quadrature(const ScalarField& field, const LevyKernel1D& kernel);

}  // namespace pnlab
