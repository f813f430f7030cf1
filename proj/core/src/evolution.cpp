#include "pnlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fft_util.hpp"

namespace pnlab {

struct ImexStepper::Impl {
  std::vector<double> symbol;  // m(k), k = 0..n/2
  mutable std::vector<double> work;
  mutable std::vector<std::complex<double>> spec;
};

ImexStepper::ImexStepper(const PeriodicGrid& grid, const LevyKernel1D& kernel)
    : grid_(grid), impl_(std::make_unique<Impl>()) {
  const int n = grid.size();
  impl_->symbol.resize(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) impl_->symbol[k] = levy_symbol(k, kernel, grid.period());
  impl_->work.resize(n);
}

ImexStepper::~ImexStepper() = default;

void ImexStepper::step(std::vector<double>& state, double tau, const Reaction& reaction,
                       const StepperConfig& cfg) const {
  const int n = grid_.size();
  if (static_cast<int>(state.size()) != n) throw std::invalid_argument("ImexStepper: state size mismatch");
  const double dt = cfg.dt;
  std::vector<double>& g = impl_->work;
  for (int j = 0; j < n; ++j) {
    g[j] = state[j] + dt * reaction.eval(tau, grid_.node(j), state[j]);
  }
  fft::forward_r2c(g, impl_->spec);
  for (int k = 0; k <= n / 2; ++k) {
    impl_->spec[k] /= 1.0 - dt * impl_->symbol[k];
  }
  fft::inverse_c2r(impl_->spec, n, state);
}

ScalarField step(const EvolutionProblem& problem, const ScalarField& state, double tau,
                 const StepperConfig& cfg) {
  ImexStepper stepper(problem.grid, problem.kernel);
  std::vector<double> values = state.values();
  stepper.step(values, tau, problem.reaction, cfg);
  return ScalarField(problem.grid, std::move(values));
}

namespace {

ProbeSample make_probe(double tau, const std::vector<double>& state, long long offset) {
  double mean = 0.0, sup = state[0], inf = state[0];
  for (double v : state) {
    mean += v;
    sup = v > sup ? v : sup;
    inf = v < inf ? v : inf;
  }
  mean /= state.size();
  const double k = static_cast<double>(offset);
  return ProbeSample{tau, mean + k, state[0] + k, sup + k, inf + k};
}

}  // namespace

RunResult run_to_time(const EvolutionProblem& problem, double T, const StepperConfig& cfg,
                      const RunOptions& options) {
  if (T < 0.0) throw std::invalid_argument("run_to_time: negative horizon");
  ImexStepper stepper(problem.grid, problem.kernel);
  std::vector<double> state = problem.initial.values();

  Trajectory traj;
  const long long offset = problem.integer_offset;
  traj.probes.push_back(make_probe(0.0, state, offset));

  std::vector<double> snap_times = options.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t next_snap = 0;
  auto take_snapshots = [&](double tau, bool final) {
    while (next_snap < snap_times.size() && (snap_times[next_snap] <= tau + 1e-12 || final)) {
      std::vector<double> copy = state;
      if (offset != 0) {
        for (double& v : copy) v += static_cast<double>(offset);
      }
      traj.snapshots.emplace_back(tau, std::move(copy));
      ++next_snap;
    }
  };
  take_snapshots(0.0, false);

  if (T == 0.0) {
    return RunResult{std::move(traj), ScalarField(problem.grid, std::move(state))};
  }

  const long long steps = std::max<long long>(1, static_cast<long long>(std::ceil(T / cfg.dt - 1e-12)));
  const double dt_eff = T / steps;
  StepperConfig cfg_eff(dt_eff, cfg.stability_bound);
  const int stride = std::max(1, options.probe_stride);
  for (long long s = 0; s < steps; ++s) {
    const double tau = s * dt_eff;
    stepper.step(state, tau, problem.reaction, cfg_eff);
    const double tau_next = (s + 1) * dt_eff;
    if ((s + 1) % stride == 0 || s + 1 == steps) {
      traj.probes.push_back(make_probe(tau_next, state, offset));
    }
    take_snapshots(tau_next, s + 1 == steps);
  }
  return RunResult{std::move(traj), ScalarField(problem.grid, std::move(state))};
}

double InitialData::bump_value(double x, double period) const {
  double s = 0.0;
  for (const BumpMode& m : bump) s += m.a * std::sin(2.0 * kPi * m.k * x / period + m.theta);
  return s;
}

double InitialData::bump_second_derivative_sup(double period) const {
  double s = 0.0;
  for (const BumpMode& m : bump) {
    const double om = 2.0 * kPi * m.k / period;
    s += std::abs(m.a) * om * om;
  }
  return s;
}

double InitialData::bump_sup() const {
  double s = 0.0;
  for (const BumpMode& m : bump) s += std::abs(m.a);
  return s;
}

EpsRunResult solve_eps_problem(const Rational& eps, const InitialData& u0,
                               const PeriodicPotential& pot, const Forcing& sigma, double T,
                               int nodes_per_unit, double dt_factor, const LevyKernel1D& kernel,
                               const RunOptions& options) {
  if (eps.num != 1 || eps.den < 1) {
    throw std::invalid_argument("solve_eps_problem: eps must be 1/m with integer m >= 1, got " + eps.str());
  }
  const long long b = u0.p.den;
  const double period = static_cast<double>(b);
  const long long n = b * nodes_per_unit;
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument(
        "solve_eps_problem: total node count " + std::to_string(n) +
        " (period " + std::to_string(b) + " x " + std::to_string(nodes_per_unit) +
        " per unit) must be a power of two >= 8; incompatible rational p");
  }
  PeriodicGrid grid(period, static_cast<int>(n));

  const long long k0 = static_cast<long long>(std::floor(u0.offset));
  const double frac = u0.offset - static_cast<double>(k0);
  ScalarField initial = ScalarField::sample(grid, [&](double x) { return u0.bump_value(x, period) + frac; });

  Reaction reaction;
  reaction.potential = pot;
  reaction.forcing = sigma;
  reaction.L = 0.0;
  reaction.p = u0.p;
  reaction.eps = eps.value();
  const StepperConfig cfg = make_stepper_config(reaction, dt_factor);

  EvolutionProblem problem{grid, kernel, reaction, initial, k0};

  // Initial-growth constant: |u(t) - u0| <= C t with
  // C = g0 (||u0''|| + 4 ||bump||) + ||W'|| + ||sigma||.
  const double C = kernel.g0 * (u0.bump_second_derivative_sup(period) + 4.0 * u0.bump_sup()) +
                   pot.sup_dW() + sigma.sup();

  // Run with an inline growth check at probe strides.
  ImexStepper stepper(grid, kernel);
  std::vector<double> state = initial.values();
  const std::vector<double> state0 = state;
  Trajectory traj;
  traj.probes.push_back(make_probe(0.0, state, k0));
  bool growth_ok = true;

  std::vector<double> snap_times = options.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t next_snap = 0;

  if (T > 0.0) {
    const long long steps = std::max<long long>(1, static_cast<long long>(std::ceil(T / cfg.dt - 1e-12)));
    const double dt_eff = T / steps;
    StepperConfig cfg_eff(dt_eff, cfg.stability_bound);
    const int stride = std::max(1, options.probe_stride);
    for (long long s = 0; s < steps; ++s) {
      stepper.step(state, s * dt_eff, reaction, cfg_eff);
      const double tau = (s + 1) * dt_eff;
      if ((s + 1) % stride == 0 || s + 1 == steps) {
        traj.probes.push_back(make_probe(tau, state, k0));
        double gap = 0.0;
        for (std::size_t j = 0; j < state.size(); ++j) {
          gap = std::max(gap, std::abs(state[j] - state0[j]));
        }
        if (gap > C * tau * (1.0 + 1e-9) + 1e-12) growth_ok = false;
      }
      while (next_snap < snap_times.size() &&
             (snap_times[next_snap] <= tau + 1e-12 || s + 1 == steps)) {
        std::vector<double> copy = state;
        if (k0 != 0) {
          for (double& v : copy) v += static_cast<double>(k0);
        }
        traj.snapshots.emplace_back(tau, std::move(copy));
        ++next_snap;
      }
    }
  }
  return EpsRunResult{std::move(traj), ScalarField(grid, std::move(state)), k0, C, growth_ok};
}

}  // namespace pnlab
