#include "config.hpp"

#include <cmath>
#include <fstream>

namespace pnlab::cli {
namespace {

using nlohmann::json;

json default_config() {
  json d;
  d["potential"]["coefficients"] = {1.0 / (4.0 * kPi * kPi)};
  d["forcing"]["modes"] = json::array();
  d["kernel"]["g0"] = 1.0 / kPi;
  d["kernel"]["split_radius"] = 1.0;
  d["numerics"]["nodes_per_period"] = 128;
  d["numerics"]["dt_factor"] = 0.05;
  d["numerics"]["horizon"] = 400.0;
  d["numerics"]["burn_in_fraction"] = 0.5;
  d["numerics"]["probe_dt"] = 0.1;
  d["numerics"]["tolerance"] = 1e-3;
  d["operator_check"]["n"] = 256;
  d["operator_check"]["k_max"] = 8;
  d["layer"]["radius"] = 100.0;
  d["layer"]["nodes"] = 4097;
  d["layer"]["relax"] = false;
  d["psi"]["L0"] = 1.0;
  d["psi"]["radius"] = 100.0;
  d["psi"]["nodes"] = 2049;
  d["cell"]["p"] = "1/2";
  d["cell"]["L"] = 1.0;
  d["hbar_table"]["ps"] = {"0", "1/4", "1/2", "1", "2"};
  d["hbar_table"]["Ls"] = {-2.0, -4.0 / 3.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, 4.0 / 3.0, 2.0};
  d["orowan"]["deltas"] = {"1/8", "1/16", "1/32"};
  d["orowan"]["p0"] = 1;
  d["orowan"]["L0"] = 1.0;
  d["orowan"]["nodes_per_unit"] = 64;
  d["orowan"]["dt_factor"] = 0.02;
  d["ansatz_residual"]["deltas"] = {"1/4", "1/8", "1/16"};
  d["ansatz_residual"]["p0"] = 1;
  d["ansatz_residual"]["L"] = 2.0;
  d["ansatz_residual"]["points"] = 64;
  d["ansatz_residual"]["radius"] = 100.0;
  d["ansatz_residual"]["nodes"] = 2049;
  d["homogenize_compare"]["eps"] = {"1/4", "1/8", "1/16"};
  d["homogenize_compare"]["p"] = "1/2";
  d["homogenize_compare"]["bump"] = {{{"k", 2}, {"amplitude", 0.1}, {"phase", 0.0}}};
  d["homogenize_compare"]["T"] = 1.0;
  d["homogenize_compare"]["eps_nodes_per_unit"] = 256;
  d["homogenize_compare"]["hj_nodes_per_unit"] = 128;
  d["homogenize_compare"]["table_path"] = "";
  d["homogenize_compare"]["table_ps"] = {"-1/2", "-1/4", "0", "1/4", "1/2", "3/4", "1", "5/4", "3/2"};
  {
    json ls = json::array();
    for (int i = 0; i <= 12; ++i) ls.push_back(-1.5 + 0.25 * i);
    d["homogenize_compare"]["table_Ls"] = ls;
  }
  return d;
}

// Recursive merge of user values over defaults; unknown keys rejected with
// their path.
void merge_checked(json& dst, const json& src, const std::string& path) {
  if (!src.is_object()) {
    throw ConfigError("config error at " + (path.empty() ? "/" : path) + ": expected an object");
  }
  for (const auto& [key, value] : src.items()) {
    const std::string here = path + "/" + key;
    if (!dst.contains(key)) throw ConfigError("config error at " + here + ": unknown key");
    json& slot = dst[key];
    if (slot.is_object() && !slot.is_array()) {
      merge_checked(slot, value, here);
    } else {
      // Type check: arrays stay arrays, scalars keep their category.
      if (slot.is_array() && !value.is_array()) {
        throw ConfigError("config error at " + here + ": expected an array");
      }
      if (slot.is_number() && !value.is_number()) {
        throw ConfigError("config error at " + here + ": expected a number");
      }
      if (slot.is_boolean() && !value.is_boolean()) {
        throw ConfigError("config error at " + here + ": expected a boolean");
      }
      if (slot.is_string() && !value.is_string()) {
        throw ConfigError("config error at " + here + ": expected a string");
      }
      slot = value;
    }
  }
}

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError("config error at " + path + ": " + message);
}

void validate(const json& c) {
  const auto& coeffs = c["potential"]["coefficients"];
  require(coeffs.is_array() && !coeffs.empty(), "/potential/coefficients", "need a nonempty array");
  for (const auto& v : coeffs) {
    require(v.is_number() && std::isfinite(v.get<double>()), "/potential/coefficients",
            "coefficients must be finite numbers");
  }
  for (const auto& m : c["forcing"]["modes"]) {
    require(m.is_object() && m.contains("j") && m.contains("k") && m.contains("amplitude"),
            "/forcing/modes", "each mode needs integer j, k and amplitude");
    require(m["j"].is_number_integer() && m["k"].is_number_integer(), "/forcing/modes",
            "frequencies j, k must be integers (exact double periodicity)");
  }
  require(c["kernel"]["g0"].get<double>() > 0.0, "/kernel/g0", "kernel strength must be > 0");
  require(c["kernel"]["split_radius"].get<double>() > 0.0, "/kernel/split_radius", "must be > 0");

  const long long npp = c["numerics"]["nodes_per_period"].get<long long>();
  require(npp >= 8 && is_power_of_two(npp), "/numerics/nodes_per_period",
          "grid constraint: node count must be a power of two >= 8, got " + std::to_string(npp));
  require(c["numerics"]["dt_factor"].get<double>() > 0.0, "/numerics/dt_factor", "must be > 0");
  require(c["numerics"]["horizon"].get<double>() > 0.0, "/numerics/horizon", "must be > 0");
  const double bf = c["numerics"]["burn_in_fraction"].get<double>();
  require(bf >= 0.25 && bf < 1.0, "/numerics/burn_in_fraction", "must lie in [0.25, 1)");

  const long long op_n = c["operator_check"]["n"].get<long long>();
  require(op_n >= 8 && is_power_of_two(op_n), "/operator_check/n",
          "grid constraint: node count must be a power of two >= 8, got " + std::to_string(op_n));

  require(c["layer"]["radius"].get<double>() > 0.0, "/layer/radius", "must be > 0");
  require(c["layer"]["nodes"].get<long long>() >= 64, "/layer/nodes", "too few samples");
  require(c["psi"]["nodes"].get<long long>() >= 64, "/psi/nodes", "too few samples");

  for (const char* key : {"deltas"}) {
    for (const auto& d : c["orowan"][key]) {
      const Rational r = Rational::parse(d.get<std::string>());
      require(r.num == 1 && r.den >= 2, std::string("/orowan/") + key, "deltas must be 1/m, m >= 2");
    }
  }
  require(c["orowan"]["p0"].get<long long>() != 0, "/orowan/p0", "p0 must be a nonzero integer");
  for (const auto& d : c["ansatz_residual"]["deltas"]) {
    Rational::parse(d.get<std::string>());
  }
  for (const auto& e : c["homogenize_compare"]["eps"]) {
    const Rational r = Rational::parse(e.get<std::string>());
    require(r.num == 1, "/homogenize_compare/eps", "eps must be 1/m");
  }
  Rational::parse(c["cell"]["p"].get<std::string>());
  for (const auto& p : c["hbar_table"]["ps"]) Rational::parse(p.get<std::string>());
}

}  // namespace

PeriodicPotential RunConfig::potential() const {
  return PeriodicPotential(effective["potential"]["coefficients"].get<std::vector<double>>());
}

Forcing RunConfig::forcing() const {
  std::vector<Forcing::Mode> modes;
  for (const auto& m : effective["forcing"]["modes"]) {
    Forcing::Mode mode;
    mode.j = m["j"].get<int>();
    mode.k = m["k"].get<int>();
    mode.a = m["amplitude"].get<double>();
    mode.theta = m.contains("phase") ? m["phase"].get<double>() : 0.0;
    modes.push_back(mode);
  }
  return Forcing(modes);
}

LevyKernel1D RunConfig::kernel() const {
  return LevyKernel1D(effective["kernel"]["g0"].get<double>(),
                      effective["kernel"]["split_radius"].get<double>());
}

int RunConfig::nodes_per_period() const { return effective["numerics"]["nodes_per_period"].get<int>(); }
double RunConfig::dt_factor() const { return effective["numerics"]["dt_factor"].get<double>(); }
double RunConfig::horizon() const { return effective["numerics"]["horizon"].get<double>(); }
double RunConfig::burn_in_fraction() const { return effective["numerics"]["burn_in_fraction"].get<double>(); }
double RunConfig::probe_dt() const { return effective["numerics"]["probe_dt"].get<double>(); }
double RunConfig::tolerance() const { return effective["numerics"]["tolerance"].get<double>(); }

CellSpec RunConfig::base_cell_spec() const {
  CellSpec spec;
  spec.potential = potential();
  spec.forcing = forcing();
  spec.nodes_per_period = nodes_per_period();
  spec.T = horizon();
  spec.T0 = burn_in_fraction() * horizon();
  spec.dt_factor = dt_factor();
  spec.probe_dt = probe_dt();
  return spec;
}

RunConfig parse_config_json(const nlohmann::json& raw) {
  json effective = default_config();
  merge_checked(effective, raw, "");
  validate(effective);
  RunConfig cfg;
  cfg.run_id = to_hex(fnv1a64(effective.dump()));
  cfg.effective = std::move(effective);
  // Constructors re-validate numeric constraints (finite coefficients etc).
  cfg.potential();
  cfg.forcing();
  cfg.kernel();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open '" + path + "'");
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config error: " + std::string(e.what()));
  }
  try {
    return parse_config_json(raw);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config error: " + std::string(e.what()));
  }
}

}  // namespace pnlab::cli
