// IMEX time integration of d_tau u = I1[u] + f(tau, y, u) on periodic grids:
// implicit spectral linear part, explicit reaction.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "pnlab/grid.hpp"
#include "pnlab/levy.hpp"
#include "pnlab/potential.hpp"

namespace pnlab {

// Reaction f(tau, y, u) = L - W'((u + p y)/eps) + sigma(tau/eps, y/eps).
// Cell problems use eps = 1; the eps-problem passes its own eps. The
// potential argument is wrapped to [0,1) before evaluation, so f depends on
// u only through the 1-periodic structure.
struct Reaction {
  PeriodicPotential potential = PeriodicPotential::sinusoidal_default();
  Forcing forcing = Forcing::zero();
  double L = 0.0;
  Rational p = Rational(0, 1);
  double eps = 1.0;

  double eval(double tau, double y, double u) const {
    const double arg = (u + p.value() * y) / eps;
    double f = L - potential.dW(arg);
    if (!forcing.empty()) f += forcing.eval(tau / eps, y / eps);
    return f;
  }

  // Lipschitz constant of f in u (certified).
  double lipschitz_u() const { return potential.sup_d2W() / eps; }
};

// dt within the monotonicity bound dt <= 0.5 / Lip_u(f) for the explicit
// part; the spectral linear part is unconditionally stable.
struct StepperConfig {
  double dt;
  double stability_bound;

  StepperConfig(double dt_in, double bound) : dt(dt_in), stability_bound(bound) {
    if (!(dt > 0.0)) throw std::invalid_argument("StepperConfig: dt must be > 0");
    if (dt > bound) {
      throw std::invalid_argument("StepperConfig: dt " + std::to_string(dt) +
                                  " violates stability bound " + std::to_string(bound));
    }
  }
};

inline StepperConfig make_stepper_config(const Reaction& reaction, double dt_factor = 0.1) {
  const double lip = reaction.lipschitz_u();
  const double bound = lip > 0.0 ? 0.5 / lip : 1e9;
  const double dt = lip > 0.0 ? dt_factor / lip : dt_factor * 1e3;
  return StepperConfig(dt, bound);
}

struct EvolutionProblem {
  PeriodicGrid grid;
  LevyKernel1D kernel;
  Reaction reaction;
  ScalarField initial;
  // Integer offset carried outside float arithmetic; u = state + offset.
  // W' is 1-periodic, so the offset never enters the reaction.
  long long integer_offset = 0;
};

struct ProbeSample {
  double tau;
  double mean;
  double at0;  // value at y = 0
  double sup;
  double inf;
};

struct Trajectory {
  std::vector<ProbeSample> probes;
  std::vector<std::pair<double, std::vector<double>>> snapshots;
};

// One IMEX-Euler step in Fourier space:
//   u+^(k) = (u^(k) + dt f^(k)) / (1 - dt m(k)).
// Holds FFTW plans and scratch; one instance per (grid, kernel), not shared
// across threads.
class ImexStepper {
 public:
  ImexStepper(const PeriodicGrid& grid, const LevyKernel1D& kernel);
  ~ImexStepper();
  ImexStepper(const ImexStepper&) = delete;
  ImexStepper& operator=(const ImexStepper&) = delete;

  const PeriodicGrid& grid() const { return grid_; }

  // Advances state in place from time tau by cfg.dt.
  void step(std::vector<double>& state, double tau, const Reaction& reaction,
            const StepperConfig& cfg) const;

 private:
  struct Impl;
  PeriodicGrid grid_;
  std::unique_ptr<Impl> impl_;
};

ScalarField step(const EvolutionProblem& problem, const ScalarField& state, double tau,
                 const StepperConfig& cfg);

struct RunOptions {
  int probe_stride = 1;                      // probe every k-th step
  std::vector<double> snapshot_times = {};   // snapshots at nearest steps
};

struct RunResult {
  Trajectory trajectory;
  ScalarField final_field;
};

// Repeated stepping with probe sampling; dt is trimmed to hit T exactly.
RunResult run_to_time(const EvolutionProblem& problem, double T, const StepperConfig& cfg,
                      const RunOptions& options = {});

// Initial data u0 = p x + bump + offset with a finite sine series bump on
// the period cell.
struct InitialData {
  Rational p = Rational(0, 1);
  struct BumpMode {
    int k = 1;
    double a = 0.0;
    double theta = 0.0;
  };
  std::vector<BumpMode> bump;  // sum a sin(2 pi k x / period + theta)
  double offset = 0.0;

  double bump_value(double x, double period) const;
  double bump_second_derivative_sup(double period) const;
  double bump_sup() const;
};

struct EpsRunResult {
  Trajectory trajectory;
  ScalarField final_periodic;  // the periodic unknown u - p x - offset
  long long integer_offset;
  double growth_constant;  // C in |u(t) - u0| <= C t
  bool growth_bound_ok;
};

// Integrates the eps-problem in the periodic unknown u - p x. eps = 1/m;
// the spatial period is the denominator of p (power of two), which makes
// px/eps periodic on the cell. Probes report u (offset applied at assembly).
EpsRunResult solve_eps_problem(const Rational& eps, const InitialData& u0,
                               const PeriodicPotential& pot, const Forcing& sigma,
                               double T, int nodes_per_unit, double dt_factor = 0.1,
                               const LevyKernel1D& kernel = half_laplacian_kernel(),
                               const RunOptions& options = {});

}  // namespace pnlab
