// Run manifest: config echo, artifact registry, timings, per-check results.
// Written even on failure. All experiment output funnels through Emitter so
// the artifact list is complete by construction.
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace pnlab::cli {

class Emitter {
 public:
  Emitter(std::filesystem::path out_dir, bool force) : dir_(std::move(out_dir)) {
    std::filesystem::create_directories(dir_);
    if (std::filesystem::exists(dir_ / "manifest.json") && !force) {
      throw std::runtime_error("output directory '" + dir_.string() +
                               "' already holds a run (manifest.json); pass --force to overwrite");
    }
  }

  const std::filesystem::path& dir() const { return dir_; }

  // Registers the artifact and returns an open stream for it.
  std::ofstream open(const std::string& name) {
    artifacts_.push_back(name);
    std::ofstream out(dir_ / name);
    if (!out) throw std::runtime_error("cannot open artifact '" + name + "' for writing");
    return out;
  }

  std::string path_for(const std::string& name) {
    artifacts_.push_back(name);
    return (dir_ / name).string();
  }

  void check(const std::string& name, bool pass) { checks_[name] = pass; }
  void timing(const std::string& name, double seconds) { timings_[name] = seconds; }

  bool all_checks_pass() const {
    for (const auto& [name, ok] : checks_) {
      if (!ok) return false;
    }
    return true;
  }

  const std::map<std::string, bool>& checks() const { return checks_; }

  void write_manifest(const std::string& run_id, const std::string& subcommand,
                      const nlohmann::json& config_echo, const std::string& status,
                      const std::string& error = "") const {
    nlohmann::json m;
    m["run_id"] = run_id;
    m["subcommand"] = subcommand;
    m["config"] = config_echo;
    m["artifacts"] = artifacts_;
    m["wall_seconds"] = timings_;
    m["checks"] = checks_;
    m["status"] = status;
    if (!error.empty()) m["error"] = error;
    std::ofstream out(dir_ / "manifest.json");
    out << m.dump(2) << "\n";
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> artifacts_;
  std::map<std::string, bool> checks_;
  std::map<std::string, double> timings_;
};

}  // namespace pnlab::cli
