#include "pnlab/cell.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pnlab {

void CellSpec::validate() const {
  if (p.den < 1) throw std::invalid_argument("CellSpec: invalid rational p");
  if (!(T > 0.0) || !(T0 >= 0.0) || !(T0 < T)) throw std::invalid_argument("CellSpec: need 0 <= T0 < T");
  if (T0 < T / 4.0) throw std::invalid_argument("CellSpec: burn-in T0 must be >= T/4");
  if (nodes_per_period < 8) throw std::invalid_argument("CellSpec: nodes_per_period too small");
  const long long n = period() * nodes_per_period;
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("CellSpec: spatial period " + std::to_string(period()) +
                                " times nodes_per_period " + std::to_string(nodes_per_period) +
                                " is not a power of two; incompatible rational p");
  }
}

PeriodicGrid CellSpec::make_grid() const {
  validate();
  return PeriodicGrid(static_cast<double>(period()), static_cast<int>(period() * nodes_per_period));
}

CellRun solve_cell(const CellSpec& spec) {
  const PeriodicGrid grid = spec.make_grid();
  Reaction reaction;
  reaction.potential = spec.potential;
  reaction.forcing = spec.forcing;
  reaction.L = spec.L;
  reaction.p = spec.p;
  reaction.eps = 1.0;
  const StepperConfig cfg = make_stepper_config(reaction, spec.dt_factor);

  EvolutionProblem problem{grid, half_laplacian_kernel(), reaction, ScalarField::zeros(grid), 0};
  RunOptions options;
  options.probe_stride = std::max(1, static_cast<int>(std::llround(spec.probe_dt / cfg.dt)));
  RunResult run = run_to_time(problem, spec.T, cfg, options);
  return CellRun{std::move(run.trajectory), std::move(run.final_field), spec};
}

LambdaEstimate estimate_lambda(const Trajectory& trajectory, double T0, double tol) {
  std::vector<const ProbeSample*> window;
  for (const ProbeSample& p : trajectory.probes) {
    if (p.tau >= T0) window.push_back(&p);
  }
  if (window.size() < 100) {
    throw std::invalid_argument("estimate_lambda: need >= 100 probes past burn-in, have " +
                                std::to_string(window.size()));
  }
  auto slope = [](const std::vector<const ProbeSample*>& pts, std::size_t lo, std::size_t hi) {
    double mt = 0.0, mv = 0.0;
    const std::size_t n = hi - lo;
    for (std::size_t i = lo; i < hi; ++i) {
      mt += pts[i]->tau;
      mv += pts[i]->mean;
    }
    mt /= n;
    mv /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double dt = pts[i]->tau - mt;
      num += dt * (pts[i]->mean - mv);
      den += dt * dt;
    }
    return num / den;
  };

  LambdaEstimate est;
  est.lambda_hat = slope(window, 0, window.size());
  const std::size_t half = window.size() / 2;
  const double s1 = slope(window, 0, half);
  const double s2 = slope(window, half, window.size());
  // Floor: double-precision resolution of the fit; keeps e meaningful when
  // both slopes are ~1e-18 (pinned cells).
  est.err_proxy = std::max(std::abs(s1 - s2), 1e-9 * (1.0 + std::abs(est.lambda_hat)));
  double rho = 0.0;
  for (const ProbeSample* p : window) {
    rho = std::max(rho, std::abs(p->at0 - est.lambda_hat * p->tau));
  }
  est.drift_residual = rho;
  est.converged = est.err_proxy <= tol;
  return est;
}

bool HbarTable::rows_monotone(double slack_factor) const {
  for (std::size_t ip = 0; ip < ps.size(); ++ip) {
    for (std::size_t il = 0; il + 1 < Ls.size(); ++il) {
      const double slack = slack_factor * (error(ip, il) + error(ip, il + 1));
      if (value(ip, il + 1) < value(ip, il) - slack) return false;
    }
  }
  return true;
}

void HbarTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("HbarTable: cannot open '" + path + "' for writing");
  out << "pnlab-hbar-table v1\n";
  out << "potential_hash " << to_hex(meta.potential_hash) << "\n";
  out << "forcing_hash " << to_hex(meta.forcing_hash) << "\n";
  out << "nodes_per_period " << meta.nodes_per_period << "\n";
  out << "T " << double_to_hex(meta.T) << "\n";
  out << "T0 " << double_to_hex(meta.T0) << "\n";
  out << "dt_factor " << double_to_hex(meta.dt_factor) << "\n";
  out << "tol " << double_to_hex(meta.tol) << "\n";
  out << "ps " << ps.size();
  for (const Rational& p : ps) out << " " << p.str();
  out << "\nLs " << Ls.size();
  for (double L : Ls) out << " " << double_to_hex(L);
  out << "\nlambda " << lambda.size();
  for (double v : lambda) out << " " << double_to_hex(v);
  out << "\nerr " << err.size();
  for (double v : err) out << " " << double_to_hex(v);
  out << "\nconverged " << converged.size();
  for (std::uint8_t c : converged) out << " " << static_cast<int>(c);
  out << "\nend\n";
  if (!out) throw std::runtime_error("HbarTable: write to '" + path + "' failed");
}

HbarTable HbarTable::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("HbarTable: cannot open '" + path + "'");
  std::string line;
  auto next_line = [&]() {
    if (!std::getline(in, line)) throw std::runtime_error("HbarTable: truncated file '" + path + "'");
    return line;
  };
  if (next_line() != "pnlab-hbar-table v1") throw std::runtime_error("HbarTable: bad magic in '" + path + "'");

  HbarTable t;
  auto expect_key = [&](const std::string& key) {
    std::istringstream ss(next_line());
    std::string k;
    ss >> k;
    if (k != key) throw std::runtime_error("HbarTable: expected key '" + key + "', got '" + k + "'");
    return ss;
  };
  {
    auto ss = expect_key("potential_hash");
    std::string h;
    ss >> h;
    t.meta.potential_hash = std::stoull(h, nullptr, 16);
  }
  {
    auto ss = expect_key("forcing_hash");
    std::string h;
    ss >> h;
    t.meta.forcing_hash = std::stoull(h, nullptr, 16);
  }
  {
    auto ss = expect_key("nodes_per_period");
    ss >> t.meta.nodes_per_period;
  }
  auto read_hex_scalar = [&](const char* key) {
    auto ss = expect_key(key);
    std::string h;
    ss >> h;
    return double_from_hex(h);
  };
  t.meta.T = read_hex_scalar("T");
  t.meta.T0 = read_hex_scalar("T0");
  t.meta.dt_factor = read_hex_scalar("dt_factor");
  t.meta.tol = read_hex_scalar("tol");
  {
    auto ss = expect_key("ps");
    std::size_t count;
    ss >> count;
    for (std::size_t i = 0; i < count; ++i) {
      std::string token;
      ss >> token;
      t.ps.push_back(Rational::parse(token));
    }
  }
  auto read_hex_vector = [&](const char* key, std::vector<double>& dst) {
    auto ss = expect_key(key);
    std::size_t count;
    ss >> count;
    for (std::size_t i = 0; i < count; ++i) {
      std::string token;
      ss >> token;
      dst.push_back(double_from_hex(token));
    }
  };
  read_hex_vector("Ls", t.Ls);
  read_hex_vector("lambda", t.lambda);
  read_hex_vector("err", t.err);
  {
    auto ss = expect_key("converged");
    std::size_t count;
    ss >> count;
    for (std::size_t i = 0; i < count; ++i) {
      int c;
      ss >> c;
      t.converged.push_back(static_cast<std::uint8_t>(c));
    }
  }
  if (next_line() != "end") throw std::runtime_error("HbarTable: missing end marker");
  if (t.lambda.size() != t.ps.size() * t.Ls.size() || t.err.size() != t.lambda.size() ||
      t.converged.size() != t.lambda.size()) {
    throw std::runtime_error("HbarTable: inconsistent sizes in '" + path + "'");
  }
  return t;
}

HbarTable build_table(const std::vector<Rational>& ps, const std::vector<double>& Ls,
                      const CellSpec& base, int workers, double tol) {
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    if (!(ps[i].value() < ps[i + 1].value())) throw std::invalid_argument("build_table: ps not sorted");
  }
  for (std::size_t i = 0; i + 1 < Ls.size(); ++i) {
    if (!(Ls[i] < Ls[i + 1])) throw std::invalid_argument("build_table: Ls not sorted");
  }
  HbarTable table;
  table.ps = ps;
  table.Ls = Ls;
  table.lambda.assign(ps.size() * Ls.size(), 0.0);
  table.err.assign(ps.size() * Ls.size(), 0.0);
  table.converged.assign(ps.size() * Ls.size(), 0);
  table.meta.potential_hash = base.potential.hash();
  table.meta.forcing_hash = base.forcing.hash();
  table.meta.nodes_per_period = base.nodes_per_period;
  table.meta.T = base.T;
  table.meta.T0 = base.T0;
  table.meta.dt_factor = base.dt_factor;
  table.meta.tol = tol;

  parallel_for(ps.size() * Ls.size(), workers, [&](std::size_t idx) {
    const std::size_t ip = idx / Ls.size();
    const std::size_t il = idx % Ls.size();
    CellSpec spec = base;
    spec.p = ps[ip];
    spec.L = Ls[il];
    const CellRun run = solve_cell(spec);
    const LambdaEstimate est = estimate_lambda(run, tol);
    table.lambda[idx] = est.lambda_hat;
    table.err[idx] = est.err_proxy;
    table.converged[idx] = est.converged ? 1 : 0;
  });
  return table;
}

SymmetryReport symmetry_suite(const std::vector<Rational>& ps, const std::vector<double>& Ls,
                              const CellSpec& base, int workers, double tol) {
  if (!base.forcing.even_in_y()) {
    throw std::invalid_argument(
        "symmetry_suite: forcing is not even in y, the p-symmetry hypothesis (Prop-type (iii)) fails");
  }
  if (!base.forcing.odd_in_y()) {
    throw std::invalid_argument(
        "symmetry_suite: forcing is not odd in y, the L-antisymmetry hypothesis (Prop-type (iv)) fails");
  }
  // W' of the finite-cosine class is a sine series, odd by construction.

  struct Task {
    Rational p;
    double L;
  };
  std::vector<Task> tasks;
  for (const Rational& p : ps) {
    for (double L : Ls) {
      tasks.push_back({p, L});
      tasks.push_back({p, -L});
      tasks.push_back({p.negated(), L});
      tasks.push_back({p, 0.0});
    }
  }
  std::vector<LambdaEstimate> results(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    CellSpec spec = base;
    spec.p = tasks[i].p;
    spec.L = tasks[i].L;
    results[i] = estimate_lambda(solve_cell(spec), tol);
  });

  SymmetryReport report;
  report.ok = true;
  for (std::size_t i = 0; i < tasks.size(); i += 4) {
    const LambdaEstimate& pl = results[i];
    const LambdaEstimate& pml = results[i + 1];
    const LambdaEstimate& mpl = results[i + 2];
    const LambdaEstimate& p0 = results[i + 3];
    const double odd_L = std::abs(pml.lambda_hat + pl.lambda_hat) - 2.0 * (pml.err_proxy + pl.err_proxy);
    const double even_p = std::abs(pl.lambda_hat - mpl.lambda_hat) - 2.0 * (pl.err_proxy + mpl.err_proxy);
    const double zero_L = std::abs(p0.lambda_hat) - p0.err_proxy;
    report.worst_odd_L = std::max(report.worst_odd_L, odd_L);
    report.worst_even_p = std::max(report.worst_even_p, even_p);
    report.worst_zero_L = std::max(report.worst_zero_L, zero_L);
    if (odd_L > 0.0 || even_p > 0.0 || zero_L > 0.0) report.ok = false;
  }
  return report;
}

}  // namespace pnlab
