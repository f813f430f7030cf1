// Monotone (Lax-Friedrichs + frozen nonlocal argument) scheme for the
// effective equation d_t u = Hbar(u_x, I1[u]) driven by an HbarTable, and
// the eps -> 0 comparison experiment.
#pragma once

#include <vector>

#include "pnlab/cell.hpp"
#include "pnlab/hull.hpp"

namespace pnlab {

// Bilinear interpolation in (p, L); exact on nodes, monotone in L when the
// table rows are monotone. Out-of-hull queries throw.
double hbar_interpolate(const HbarTable& table, double p, double L);

// Numerical-diffusion coefficient theta (from the table's p-Lipschitz
// estimate) and dt under the CFL bound dt <= h/(2 max|dHbar/dp|) combined
// with dt * Lip_L(Hbar) * |I1 diagonal| <= 1/2.
struct SchemeConfig {
  double theta;
  double dt;

  SchemeConfig(double theta_in, double dt_in) : theta(theta_in), dt(dt_in) {
    if (!(theta >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("SchemeConfig: invalid");
  }
};

struct HJProblem {
  PeriodicGrid grid;
  const HbarTable* table;
  Rational p;          // affine slope of u = p x + v
  InitialData initial; // bump part (p must match)
  double T;
  LevyKernel1D kernel = half_laplacian_kernel();

  void validate() const;
};

SchemeConfig make_scheme_config(const HJProblem& problem, double safety = 0.9);

// Per node: L_j = I1[v] (spectral; the affine part contributes zero),
// p_j = p + central difference of v, update
//   v_j += dt * (Hbar(p_j, L_j) + theta (v_{j+1} - 2 v_j + v_{j-1}) / h).
class HJSolver {
 public:
  HJSolver(const HJProblem& problem, const SchemeConfig& cfg);

  const PeriodicGrid& grid() const { return grid_; }
  const SchemeConfig& config() const { return cfg_; }

  // One step in place on the periodic part v. Throws on out-of-hull (p, L)
  // naming the offending node.
  void step(std::vector<double>& v) const;

  RunResult run(const RunOptions& options = {}) const;

 private:
  PeriodicGrid grid_;
  const HbarTable* table_;
  Rational p_;
  InitialData initial_;
  double T_;
  SchemeConfig cfg_;
  LevyOperator1D op_;
};

struct CompareRow {
  Rational eps;
  std::vector<double> times;
  std::vector<double> sup_diff;  // sup |u_eps - u_hom| at each time
};

// Runs solve_eps_problem and the homogenized solver from the same initial
// data and reports sup-norm differences at intermediate times and T.
std::vector<CompareRow> compare_homogenization(const std::vector<Rational>& eps_list,
                                               const InitialData& u0,
                                               const PeriodicPotential& pot,
                                               const Forcing& sigma, double T,
                                               const HbarTable& table,
                                               int eps_nodes_per_unit, int hj_nodes_per_unit,
                                               int workers = 1);

}  // namespace pnlab
