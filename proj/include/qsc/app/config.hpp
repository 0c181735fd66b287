#pragma once

#include "qsc/errors.hpp"
#include "qsc/pde/char_fn.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace qsc::app {

/// Cross-check tolerances. Every numeric tolerance is multiplied by `scale`;
/// symbolic checks stay exact.
struct Tolerances {
  double scale = 1.0;
  double ode_rel = 1e-8;
  double pde_abs = 5e-4;
  double moc_abs = 1e-10;
  double residual = 1e-6;
  double oracle_sigmas = 5.0;
  double oracle_rel = 0.02;
};

struct RunConfig {
  std::string command;
  double alpha = 1.0;
  double t_max = 1.0;
  double output_step = 0.01;
  std::string out = ".";

  double solver_dt = 1e-3;

  double pde_t = 0.0;   // 0: use t_max
  double pde_dt = 0.0;  // 0: automatic
  pde::GridSpec pde_grid;
  std::size_t pde_stride = 10;

  double oracle_dt = 1e-3;
  double oracle_t = 0.0;  // 0: use t_max
  std::size_t oracle_d_at = 40;
  std::size_t oracle_d_anc = 3;
  std::size_t oracle_n_traj = 2000;
  std::uint64_t seed = 20240611;
  std::size_t oracle_workers = 0;

  std::size_t compare_n_traj = 500;
  double compare_pde_dk = 0.25;

  Tolerances tol;

  double pde_time() const { return pde_t > 0.0 ? pde_t : t_max; }
  double oracle_time() const { return oracle_t > 0.0 ? oracle_t : t_max; }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
    };
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("run.alpha must be finite and >= 0");
    positive(t_max, "run.t_max");
    positive(output_step, "run.output_step");
    positive(solver_dt, "solver.dt");
    if (pde_t < 0.0) throw ConfigError("pde.t must be >= 0");
    if (pde_dt < 0.0) throw ConfigError("pde.dt must be >= 0");
    pde_grid.validate();
    if (pde_stride == 0) throw ConfigError("pde.stride must be positive");
    positive(oracle_dt, "oracle.dt");
    if (oracle_t < 0.0) throw ConfigError("oracle.t must be >= 0");
    if (oracle_n_traj < 100 || compare_n_traj < 100) throw ConfigError("trajectory counts must be >= 100");
    positive(compare_pde_dk, "compare.pde_dk");
    positive(tol.scale, "tolerance.scale");
    positive(tol.ode_rel, "tolerance.ode_rel");
    positive(tol.pde_abs, "tolerance.pde_abs");
    positive(tol.moc_abs, "tolerance.moc_abs");
    positive(tol.residual, "tolerance.residual");
    positive(tol.oracle_sigmas, "tolerance.oracle_sigmas");
    positive(tol.oracle_rel, "tolerance.oracle_rel");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
  return out;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key + ": not a nonnegative integer: '" + v + "'");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

inline Setter set_double(double RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_double(k, v); };
}

inline Setter set_size(std::size_t RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.*field = static_cast<std::size_t>(parse_uint(k, v));
  };
}

inline Setter set_grid(double pde::GridSpec::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.pde_grid.*field = parse_double(k, v); };
}

inline Setter set_tol(double Tolerances::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) { c.tol.*field = parse_double(k, v); };
}

inline const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"run.alpha", set_double(&RunConfig::alpha)},
      {"run.t_max", set_double(&RunConfig::t_max)},
      {"run.output_step", set_double(&RunConfig::output_step)},
      {"run.out", [](RunConfig& c, const std::string&, const std::string& v) { c.out = v; }},
      {"solver.dt", set_double(&RunConfig::solver_dt)},
      {"pde.t", set_double(&RunConfig::pde_t)},
      {"pde.dt", set_double(&RunConfig::pde_dt)},
      {"pde.k_min", set_grid(&pde::GridSpec::k_min)},
      {"pde.k_max", set_grid(&pde::GridSpec::k_max)},
      {"pde.dk", set_grid(&pde::GridSpec::dk)},
      {"pde.l_min", set_grid(&pde::GridSpec::l_min)},
      {"pde.l_max", set_grid(&pde::GridSpec::l_max)},
      {"pde.dl", set_grid(&pde::GridSpec::dl)},
      {"pde.stride", set_size(&RunConfig::pde_stride)},
      {"oracle.dt", set_double(&RunConfig::oracle_dt)},
      {"oracle.t", set_double(&RunConfig::oracle_t)},
      {"oracle.d_at", set_size(&RunConfig::oracle_d_at)},
      {"oracle.d_anc", set_size(&RunConfig::oracle_d_anc)},
      {"oracle.n_traj", set_size(&RunConfig::oracle_n_traj)},
      {"oracle.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_uint(k, v); }},
      {"oracle.workers", set_size(&RunConfig::oracle_workers)},
      {"compare.n_traj", set_size(&RunConfig::compare_n_traj)},
      {"compare.pde_dk", set_double(&RunConfig::compare_pde_dk)},
      {"tolerance.scale", set_tol(&Tolerances::scale)},
      {"tolerance.ode_rel", set_tol(&Tolerances::ode_rel)},
      {"tolerance.pde_abs", set_tol(&Tolerances::pde_abs)},
      {"tolerance.moc_abs", set_tol(&Tolerances::moc_abs)},
      {"tolerance.residual", set_tol(&Tolerances::residual)},
      {"tolerance.oracle_sigmas", set_tol(&Tolerances::oracle_sigmas)},
      {"tolerance.oracle_rel", set_tol(&Tolerances::oracle_rel)},
  };
  return table;
}

}  // namespace detail

inline std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, s] : detail::setters()) keys.push_back(k);
  return keys;
}

inline void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = detail::setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

/// Flat "section.key = value" lines; '#' starts a comment.
inline void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& source = "<config>") {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'section.key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_config_text(cfg, in, path);
}

inline RunConfig parse_config_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  apply_config_text(cfg, in);
  return cfg;
}

}  // namespace qsc::app
