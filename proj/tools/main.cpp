// pnlab: numerical laboratory for nonlocal dislocation dynamics and its
// homogenized plastic flow rule.
#include <cstdio>
#include <functional>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "experiments.hpp"

namespace {

using pnlab::cli::ConfigError;
using pnlab::cli::Emitter;
using pnlab::cli::RunConfig;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;

using Experiment = std::function<void(const RunConfig&, Emitter&, int)>;

const std::map<std::string, Experiment>& experiments() {
  static const std::map<std::string, Experiment> table = {
      {"operator-check", pnlab::cli::run_operator_check},
      {"layer", pnlab::cli::run_layer},
      {"psi", pnlab::cli::run_psi},
      {"cell", pnlab::cli::run_cell},
      {"hbar-table", pnlab::cli::run_hbar_table},
      {"orowan", pnlab::cli::run_orowan},
      {"ansatz-residual", pnlab::cli::run_ansatz_residual},
      {"homogenize-compare", pnlab::cli::run_homogenize_compare},
  };
  return table;
}

int run_subcommand(const std::string& name, const std::string& config_path,
                   std::string out_dir, bool force, int workers) {
  RunConfig cfg;
  try {
    cfg = pnlab::cli::parse_config(config_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfigError;
  }
  if (out_dir.empty()) out_dir = "runs/" + name + "-" + cfg.run_id.substr(0, 8);

  std::unique_ptr<Emitter> emitter;
  try {
    emitter = std::make_unique<Emitter>(out_dir, force);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfigError;
  }

  try {
    experiments().at(name)(cfg, *emitter, workers);
  } catch (const std::exception& e) {
    emitter->write_manifest(cfg.run_id, name, cfg.effective, "solver-error", e.what());
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolverError;
  }

  const bool pass = emitter->all_checks_pass();
  emitter->write_manifest(cfg.run_id, name, cfg.effective, pass ? "pass" : "check-failure");
  for (const auto& [check, ok] : emitter->checks()) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", check.c_str());
  }
  std::printf("%s: %s (artifacts in %s)\n", name.c_str(), pass ? "pass" : "CHECK FAILURE",
              out_dir.c_str());
  return pass ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pnlab - nonlocal dislocation dynamics and effective plastic flow at desk scale"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool force = false;
  int workers = 4;

  for (const auto& [name, fn] : experiments()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (default runs/<name>-<runid>)");
    sub->add_flag("--force", force, "overwrite an existing run directory");
    sub->add_option("--workers", workers, "worker threads for parallel sweeps");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  return run_subcommand(name, config_path, out_dir, force, workers);
}
