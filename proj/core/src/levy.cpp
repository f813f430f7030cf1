#include "pnlab/levy.hpp"

#include <cmath>
#include <complex>

#include "fft_util.hpp"

namespace pnlab {

double levy_symbol(int k, const LevyKernel1D& kernel, double period) {
  if (!(period > 0.0)) throw std::invalid_argument("levy_symbol: period must be > 0");
  if (k == 0) return 0.0;
  const double xi = 2.0 * kPi * std::abs(static_cast<double>(k)) / period;
  return -kPi * kernel.g0 * xi;
}

LevyOperator1D::LevyOperator1D(const PeriodicGrid& grid, const LevyKernel1D& kernel)
    : grid_(grid), kernel_(kernel) {
  const int n = grid.size();
  // Stencil = inverse DFT of the (real, even) symbol.
  std::vector<std::complex<double>> symbol(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) symbol[k] = levy_symbol(k, kernel, grid.period());
  fft::inverse_c2r(symbol, n, stencil_);
  // The discrete jump kernel must be nonnegative off the diagonal; the
  // symbol -|xi| periodizes 1/(pi z^2), so violations can only be rounding.
  double scale = std::abs(stencil_[0]);
  for (int d = 1; d < n; ++d) {
    if (stencil_[d] < -1e-12 * scale) {
      throw std::runtime_error("LevyOperator1D: negative off-diagonal stencil entry");
    }
  }
}

ScalarField LevyOperator1D::apply(const ScalarField& field) const {
  if (!(field.grid() == grid_)) throw std::invalid_argument("LevyOperator1D: grid mismatch");
  const int n = grid_.size();
  const std::vector<double>& u = field.values();
  std::vector<double> out(n);
  // Fixed offset-order summation: shift covariant bit-for-bit.
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int d = 0; d < n; ++d) {
      int j = i + d;
      if (j >= n) j -= n;
      acc += stencil_[d] * u[j];
    }
    out[i] = acc;
  }
  return ScalarField(grid_, std::move(out));
}

ScalarField apply_spectral(const ScalarField& field, const LevyKernel1D& kernel) {
  return LevyOperator1D(field.grid(), kernel).apply(field);
}

ScalarField apply_quadrature(const ScalarField& field, const LevyKernel1D& kernel) {
  const PeriodicGrid& grid = field.grid();
  const int n = grid.size();
  const double h = grid.spacing();
  const double Lambda = grid.period();
  if (kernel.r < 2.0 * h) {
    throw std::invalid_argument("apply_quadrature: split radius r < 2h, inner integral unresolvable");
  }
  const int m_r = static_cast<int>(std::floor(kernel.r / h + 1e-12));  // split snapped to the grid
  const int periods = 50;
  const double cutoff = periods * Lambda;
  const int m_max = periods * n;  // offsets out to the cutoff

  const std::vector<double>& u = field.values();
  const double g0 = kernel.g0;
  const double u_mean = field.mean();

  // Trapezoid weights in |z|; offset m=1 carries the [0,h] cell (rectangle
  // with the first resolvable second difference) plus its trapezoid half.
  std::vector<double> w_inner(m_r + 1, h);
  w_inner[1] = 1.5 * h;
  w_inner[m_r] = 0.5 * h;

  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double inner = 0.0;
    for (int m = 1; m <= m_r; ++m) {
      const double z = m * h;
      int jp = i + m;
      while (jp >= n) jp -= n;
      int jm = i - m;
      while (jm < 0) jm += n;
      inner += w_inner[m] * (u[jp] + u[jm] - 2.0 * u[i]) / (z * z);
    }
    // Outer integral, each side separately; half weights at m_r and m_max.
    double outer = 0.0;
    for (int m = m_r; m <= m_max; ++m) {
      const double z = m * h;
      const double w = (m == m_r || m == m_max) ? 0.5 * h : h;
      const int jp = (i + m) % n;
      const int jm = ((i - m) % n + n) % n;
      outer += w * ((u[jp] - u[i]) + (u[jm] - u[i])) / (z * z);
    }
    // Analytic remainder beyond the cutoff: u(x+z) ~ mean(u).
    const double remainder = (u_mean - u[i]) * 2.0 / cutoff;
    out[i] = g0 * (inner + outer + remainder);
  }
  return ScalarField(grid, std::move(out));
}

}  // namespace pnlab
