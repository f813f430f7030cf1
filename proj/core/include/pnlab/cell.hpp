// Cell problem d_tau w = I1[w] + L - W'(w + p y) + sigma(tau, y), long-time
// drift extraction lambda = Hbar(p, L), structural property suites, and
// persisted (p, L) tables.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnlab/evolution.hpp"

namespace pnlab {

struct CellSpec {
  Rational p = Rational(0, 1);
  double L = 0.0;
  PeriodicPotential potential = PeriodicPotential::sinusoidal_default();
  Forcing forcing = Forcing::zero();
  int nodes_per_period = 128;  // per unit period; total n = b * npp
  double T = 200.0;
  double T0 = 100.0;  // burn-in, must satisfy T0 >= T/4
  double dt_factor = 0.1;
  double probe_dt = 0.1;  // target probe spacing in time

  void validate() const;
  // Smallest spatial period b with p*b integer (the denominator of p).
  long long period() const { return p.den; }
  PeriodicGrid make_grid() const;
};

// lambda_hat with its a-posteriori error proxy. e is the discrepancy of the
// two half-window slopes; rho = sup over probes of |w(tau, 0) - lambda_hat
// tau| on the fit window.
struct LambdaEstimate {
  double lambda_hat = 0.0;
  double err_proxy = 0.0;
  double drift_residual = 0.0;
  bool converged = false;
};

struct CellRun {
  Trajectory trajectory;
  ScalarField final_field;
  CellSpec spec;
};

CellRun solve_cell(const CellSpec& spec);

// Least-squares slope of mean(w)(tau) on [T0, T]. Requires >= 100 probes
// past burn-in. The error proxy carries a 1e-9*(1+|lambda|) floor (double
// precision resolution of the fit).
LambdaEstimate estimate_lambda(const Trajectory& trajectory, double T0, double tol = 1e-3);

inline LambdaEstimate estimate_lambda(const CellRun& run, double tol = 1e-3) {
  return estimate_lambda(run.trajectory, run.spec.T0, tol);
}

// Persisted lambda(p, L) grid with per-entry error proxies. Row-major in
// (p, L); round-trips through the file format bit-exactly (hexfloat).
struct HbarTable {
  std::vector<Rational> ps;  // sorted by value
  std::vector<double> Ls;    // sorted
  std::vector<double> lambda;
  std::vector<double> err;
  std::vector<std::uint8_t> converged;

  struct Metadata {
    std::uint64_t potential_hash = 0;
    std::uint64_t forcing_hash = 0;
    int nodes_per_period = 0;
    double T = 0.0;
    double T0 = 0.0;
    double dt_factor = 0.0;
    double tol = 0.0;
  } meta;

  std::size_t index(std::size_t ip, std::size_t il) const { return ip * Ls.size() + il; }
  double value(std::size_t ip, std::size_t il) const { return lambda[index(ip, il)]; }
  double error(std::size_t ip, std::size_t il) const { return err[index(ip, il)]; }

  // Every row non-decreasing in L within 2*(e_j + e_{j+1}) slack.
  bool rows_monotone(double slack_factor = 2.0) const;

  void write(const std::string& path) const;
  static HbarTable read(const std::string& path);
};

// Parallel map of solve_cell + estimate_lambda over the (p, L) grid.
// Non-converged entries are flagged; the table is still produced.
HbarTable build_table(const std::vector<Rational>& ps, const std::vector<double>& Ls,
                      const CellSpec& base, int workers = 1, double tol = 1e-3);

// Prop-type symmetry checks on sampled (p, L) pairs.
struct SymmetryReport {
  double worst_odd_L = 0.0;    // max |lambda(p,-L) + lambda(p,L)| - 2(e+e')
  double worst_even_p = 0.0;   // max |lambda(p,L) - lambda(-p,L)| - 2(e+e')
  double worst_zero_L = 0.0;   // max |lambda(p,0)| - e
  bool ok = false;
};

// Requires sigma even in y for the p-symmetry and W' odd + sigma odd in y
// for the L-antisymmetry; refuses (throws) when the hypotheses fail.
SymmetryReport symmetry_suite(const std::vector<Rational>& ps, const std::vector<double>& Ls,
                              const CellSpec& base, int workers = 1, double tol = 1e-3);

}  // namespace pnlab
