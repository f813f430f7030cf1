#include "pnlab/hj.hpp"

#include <algorithm>
#include <cmath>

namespace pnlab {
namespace {

double table_lipschitz_p(const HbarTable& t) {
  double lip = 0.0;
  for (std::size_t il = 0; il < t.Ls.size(); ++il) {
    for (std::size_t ip = 0; ip + 1 < t.ps.size(); ++ip) {
      const double dp = t.ps[ip + 1].value() - t.ps[ip].value();
      lip = std::max(lip, std::abs(t.value(ip + 1, il) - t.value(ip, il)) / dp);
    }
  }
  return lip;
}

double table_lipschitz_L(const HbarTable& t) {
  double lip = 0.0;
  for (std::size_t ip = 0; ip < t.ps.size(); ++ip) {
    for (std::size_t il = 0; il + 1 < t.Ls.size(); ++il) {
      const double dL = t.Ls[il + 1] - t.Ls[il];
      lip = std::max(lip, std::abs(t.value(ip, il + 1) - t.value(ip, il)) / dL);
    }
  }
  return lip;
}

}  // namespace

double hbar_interpolate(const HbarTable& table, double p, double L) {
  if (table.ps.size() < 2 || table.Ls.size() < 2) {
    throw std::invalid_argument("hbar_interpolate: table needs at least a 2x2 grid");
  }
  const double p_lo = table.ps.front().value();
  const double p_hi = table.ps.back().value();
  const double L_lo = table.Ls.front();
  const double L_hi = table.Ls.back();
  if (p < p_lo || p > p_hi || L < L_lo || L > L_hi) {
    throw std::out_of_range("hbar_interpolate: query (p=" + std::to_string(p) + ", L=" +
                            std::to_string(L) + ") outside table hull [" + std::to_string(p_lo) +
                            "," + std::to_string(p_hi) + "]x[" + std::to_string(L_lo) + "," +
                            std::to_string(L_hi) + "]");
  }
  std::size_t ip = 0;
  while (ip + 2 < table.ps.size() && table.ps[ip + 1].value() <= p) ++ip;
  std::size_t il = 0;
  while (il + 2 < table.Ls.size() && table.Ls[il + 1] <= L) ++il;
  const double p0 = table.ps[ip].value();
  const double p1 = table.ps[ip + 1].value();
  const double L0 = table.Ls[il];
  const double L1 = table.Ls[il + 1];
  const double tp = (p - p0) / (p1 - p0);
  const double tl = (L - L0) / (L1 - L0);
  const double v00 = table.value(ip, il);
  const double v01 = table.value(ip, il + 1);
  const double v10 = table.value(ip + 1, il);
  const double v11 = table.value(ip + 1, il + 1);
  return (1.0 - tp) * ((1.0 - tl) * v00 + tl * v01) + tp * ((1.0 - tl) * v10 + tl * v11);
}

void HJProblem::validate() const {
  if (table == nullptr) throw std::invalid_argument("HJProblem: missing table");
  if (!(T >= 0.0)) throw std::invalid_argument("HJProblem: negative horizon");
  // Gradient and I1 ranges of the initial data must sit inside the table
  // hull with margin; the bump is a finite sine series, so both are exact.
  const double period = grid.period();
  double bump_grad = 0.0, bump_i1 = 0.0;
  for (const auto& m : initial.bump) {
    const double om = 2.0 * kPi * m.k / period;
    bump_grad += std::abs(m.a) * om;
    bump_i1 += std::abs(m.a) * kPi * kernel.g0 * om;
  }
  const double margin = 1.25;
  const double p_need = std::abs(p.value()) + margin * bump_grad;
  const double L_need = margin * bump_i1;
  if (p.value() - margin * bump_grad < table->ps.front().value() ||
      p_need > table->ps.back().value() || -L_need < table->Ls.front() ||
      L_need > table->Ls.back()) {
    throw std::invalid_argument("HJProblem: initial (p, L) range (with 25% margin) not covered by table hull");
  }
}

SchemeConfig make_scheme_config(const HJProblem& problem, double safety) {
  const double h = problem.grid.spacing();
  const double lip_p = std::max(table_lipschitz_p(*problem.table), 1e-8);
  const double lip_L = table_lipschitz_L(*problem.table);
  const double theta = 0.5 * lip_p;
  LevyOperator1D op(problem.grid, problem.kernel);
  const double op_diag = std::abs(op.stencil()[0]);
  const double dt_p = h / (2.0 * lip_p);
  const double dt_L = lip_L * op_diag > 0.0 ? 0.5 / (lip_L * op_diag) : 1e9;
  return SchemeConfig(theta, safety * std::min(dt_p, dt_L));
}

HJSolver::HJSolver(const HJProblem& problem, const SchemeConfig& cfg)
    : grid_(problem.grid), table_(problem.table), p_(problem.p), initial_(problem.initial),
      T_(problem.T), cfg_(cfg), op_(problem.grid, problem.kernel) {
  problem.validate();
}

void HJSolver::step(std::vector<double>& v) const {
  const int n = grid_.size();
  const double h = grid_.spacing();
  const double dt = cfg_.dt;
  const double theta = cfg_.theta;
  const double p_aff = p_.value();

  ScalarField field(grid_, v);
  const ScalarField i1 = op_.apply(field);

  std::vector<double> next(n);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const int jm = (j - 1 + n) % n;
    const double p_j = p_aff + (v[jp] - v[jm]) / (2.0 * h);
    const double L_j = i1[j];
    double hbar;
    try {
      hbar = hbar_interpolate(*table_, p_j, L_j);
    } catch (const std::out_of_range& e) {
      throw std::runtime_error("HJSolver: out-of-hull state at node " + std::to_string(j) + ": " +
                               e.what());
    }
    next[j] = v[j] + dt * (hbar + theta * (v[jp] - 2.0 * v[j] + v[jm]) / h);
  }
  v.swap(next);
}

RunResult HJSolver::run(const RunOptions& options) const {
  const int n = grid_.size();
  // Integer part of the offset is bookkeeping only (the scheme sees v through
  // differences and I1); makes the +1 shift invariance bit-exact.
  const long long k0 = static_cast<long long>(std::floor(initial_.offset));
  const double frac = initial_.offset - static_cast<double>(k0);
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) {
    v[j] = initial_.bump_value(grid_.node(j), grid_.period()) + frac;
  }

  Trajectory traj;
  const double koff = static_cast<double>(k0);
  auto probe = [&](double t) {
    double mean = 0.0, sup = v[0], inf = v[0];
    for (double val : v) {
      mean += val;
      sup = std::max(sup, val);
      inf = std::min(inf, val);
    }
    traj.probes.push_back(ProbeSample{t, mean / n + koff, v[0] + koff, sup + koff, inf + koff});
  };
  probe(0.0);

  std::vector<double> snap_times = options.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t next_snap = 0;

  if (T_ > 0.0) {
    const long long steps = std::max<long long>(1, static_cast<long long>(std::ceil(T_ / cfg_.dt - 1e-12)));
    const double dt_eff = T_ / steps;
    SchemeConfig cfg_eff(cfg_.theta, dt_eff);
    HJSolver worker(*this);
    worker.cfg_ = cfg_eff;
    const int stride = std::max(1, options.probe_stride);
    for (long long s = 0; s < steps; ++s) {
      worker.step(v);
      const double t = (s + 1) * dt_eff;
      if ((s + 1) % stride == 0 || s + 1 == steps) probe(t);
      while (next_snap < snap_times.size() && (snap_times[next_snap] <= t + 1e-12 || s + 1 == steps)) {
        std::vector<double> copy = v;
        if (k0 != 0) {
          for (double& val : copy) val += koff;
        }
        traj.snapshots.emplace_back(t, std::move(copy));
        ++next_snap;
      }
    }
  }
  if (k0 != 0) {
    for (double& val : v) val += koff;
  }
  return RunResult{std::move(traj), ScalarField(grid_, std::move(v))};
}

std::vector<CompareRow> compare_homogenization(const std::vector<Rational>& eps_list,
                                               const InitialData& u0, const PeriodicPotential& pot,
                                               const Forcing& sigma, double T,
                                               const HbarTable& table, int eps_nodes_per_unit,
                                               int hj_nodes_per_unit, int workers) {
  // Shared homogenized run (one per comparison).
  const long long b = u0.p.den;
  PeriodicGrid hj_grid(static_cast<double>(b), static_cast<int>(b * hj_nodes_per_unit));
  HJProblem hj_problem{hj_grid, &table, u0.p, u0, T};
  const SchemeConfig cfg = make_scheme_config(hj_problem);
  HJSolver hj(hj_problem, cfg);
  RunOptions hj_opts;
  const std::vector<double> report_times = {0.25 * T, 0.5 * T, 0.75 * T, T};
  hj_opts.snapshot_times = report_times;
  const RunResult hom = hj.run(hj_opts);

  std::vector<CompareRow> rows(eps_list.size());
  parallel_for(eps_list.size(), workers, [&](std::size_t idx) {
    RunOptions eps_opts;
    eps_opts.snapshot_times = report_times;
    eps_opts.probe_stride = 64;
    const EpsRunResult run =
        solve_eps_problem(eps_list[idx], u0, pot, sigma, T, eps_nodes_per_unit, 0.1,
                          half_laplacian_kernel(), eps_opts);
    CompareRow row;
    row.eps = eps_list[idx];
    const int n_eps = run.final_periodic.size();
    const int n_hj = hj_grid.size();
    const int ratio = n_eps / n_hj;
    if (ratio * n_hj != n_eps) {
      throw std::invalid_argument("compare_homogenization: eps grid must refine the homogenized grid");
    }
    for (std::size_t si = 0; si < report_times.size(); ++si) {
      const std::vector<double>& ue = run.trajectory.snapshots[si].second;
      const std::vector<double>& uh = hom.trajectory.snapshots[si].second;
      double sup = 0.0;
      for (int j = 0; j < n_hj; ++j) {
        sup = std::max(sup, std::abs(ue[static_cast<std::size_t>(j) * ratio] - uh[j]));
      }
      row.times.push_back(report_times[si]);
      row.sup_diff.push_back(sup);
    }
    rows[idx] = std::move(row);
  });
  return rows;
}

}  // namespace pnlab
