#pragma once

#include "qsc/app/checks.hpp"
#include "qsc/app/config.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qsc::app {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kOk = 0, kToleranceFailure = 1, kConfigFailure = 2, kInternalFailure = 3 };

namespace detail {

inline std::filesystem::path output_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out + "': " + ec.message());
  return dir;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  return os;
}

inline std::size_t steps_per_record(double output_step, double t_max, double dt) {
  const double h = t_max / std::ceil(t_max / dt - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(output_step / h)));
}

inline int report(std::ostream& os, const std::vector<CheckResult>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    os << format_check(c) << "\n";
    ok = ok && c.pass;
  }
  os << (ok ? "all checks passed" : "some checks FAILED") << "\n";
  return ok ? kOk : kToleranceFailure;
}

inline fock::OracleConfig oracle_config(const RunConfig& cfg, std::size_t n_traj) {
  fock::OracleConfig oc;
  oc.alpha = cfg.alpha;
  oc.dt = cfg.oracle_dt;
  oc.t = cfg.oracle_time();
  oc.d_at = cfg.oracle_d_at;
  oc.d_anc = cfg.oracle_d_anc;
  oc.n_traj = n_traj;
  oc.seed = cfg.seed;
  oc.workers = cfg.oracle_workers;
  oc.record_every = steps_per_record(cfg.output_step, oc.t, oc.dt);
  return oc;
}

struct OracleRun {
  std::vector<fock::AtomMoments> atoms;
  std::vector<fock::TrajectoryStats> field_x;
  std::vector<fock::TrajectoryStats> field_p;
};

inline OracleRun run_oracle(const fock::OracleConfig& base) {
  OracleRun run;
  run.atoms = fock::simulate_atom_moments(base);
  fock::OracleConfig oc = base;
  oc.phase = fock::HomodynePhase::x;
  run.field_x = fock::homodyne_monte_carlo(oc);
  oc.phase = fock::HomodynePhase::p;
  run.field_p = fock::homodyne_monte_carlo(oc);
  return run;
}

inline std::vector<CheckResult> oracle_checks(const OracleRun& run, double alpha, const Tolerances& tol) {
  const auto& atom = run.atoms.back();
  const auto exact = gaussian::closed_form_covariances(alpha, atom.t);
  char detail[64];
  std::snprintf(detail, sizeof detail, "t=%g", atom.t);
  std::vector<CheckResult> out;
  const double rel = tol.oracle_rel * tol.scale;
  out.push_back(bounded("oracle_var_p_at", relative_deviation(atom.var_p, exact.var_p_at()), rel, detail));
  out.push_back(bounded("oracle_var_x_at", relative_deviation(atom.var_x, exact.var_x_at()), rel, detail));
  const double sig = tol.oracle_sigmas * tol.scale;
  std::snprintf(detail, sizeof detail, "t=%g n=%zu, in standard errors", run.field_x.back().t, run.field_x.back().n);
  out.push_back(bounded("oracle_var_x_ph", sigma_distance(run.field_x.back(), exact.var_x_ph()), sig, detail));
  out.push_back(bounded("oracle_var_p_ph", sigma_distance(run.field_p.back(), exact.var_p_ph()), sig, detail));
  return out;
}

inline std::vector<CheckResult> pde_checks(const RunConfig& cfg, const pde::GridSpec& grid, std::ostream* dumps_dir_log,
                                           const std::filesystem::path* dump_dir) {
  const Tolerances& tol = cfg.tol;
  const double t = cfg.pde_time();
  std::vector<CheckResult> out;
  for (auto family : {CharFamily::F, CharFamily::G}) {
    const std::string f = family_name(family);
    const pde::CharPde eq(family, cfg.alpha);
    out.push_back(bounded("pde_moc_" + f, moc_vs_closed_form(family, cfg.alpha, t, 3.0, 0.5), tol.moc_abs * tol.scale,
                          "k,l in [-3,3]"));
    const pde::CharSurface s = pde::fd_solve(eq, grid, t, cfg.pde_dt);
    char detail[64];
    std::snprintf(detail, sizeof detail, "dl=%g dk=%g", grid.dl, grid.dk);
    out.push_back(bounded("pde_fd_" + f, pde::max_error_vs_closed_form(s), tol.pde_abs * tol.scale, detail));
    out.push_back(bounded("pde_residual_" + f, closed_form_residual(family, cfg.alpha, t, 3.0, 0.5),
                          tol.residual * tol.scale, "k,l in [-3,3]"));
    if (dump_dir) {
      const auto path = *dump_dir / ("pde_" + f + ".csv");
      auto os = open_output(path);
      pde::write_surface_csv(os, s, cfg.pde_stride);
      if (dumps_dir_log) *dumps_dir_log << "wrote " << path.string() << "\n";
    }
  }
  return out;
}

}  // namespace detail

/// Symbolic derivations as plain text.
inline int run_derive(const RunConfig&, std::ostream& os) {
  const HPSystem sys = series_product(single_pass_p(), single_pass_x());
  os << "# double pass = series product of (L1 = a*p/sqrt2, H1 = 0) and (L2 = -i*a*x/sqrt2, H2 = 0)\n";
  os << "L = " << sys.L().to_string() << "\n";
  os << "H = " << sys.H().to_string() << "\n";
  os << "L* = " << sys.L_star().to_string() << "\n";
  os << "matches a(p - i x)/sqrt2, (1/4)a^2(px + xp): " << (sys == double_pass_system() ? "yes" : "no") << "\n";
  os << "\n# input-output relations\n" << io_relations_text(output_quadrature_relations(sys));
  os << "\n# Lindblad generators\n";
  os << "L(x) = " << lindblad(sys, WeylTerm(OpPoly::x())).to_string() << "\n";
  os << "L(p) = " << lindblad(sys, WeylTerm(OpPoly::p())).to_string() << "\n";
  os << "\n# characteristic functions: dF/dt = c0 F + c1 dF/dl\n";
  for (auto family : {CharFamily::F, CharFamily::G}) {
    const PdeCoefficients c = char_fn_generator(sys, family);
    os << family_name(family) << ": c0 = " << c.c0.to_string() << "\n";
    os << family_name(family) << ": c1 = " << c.c1.to_string() << "\n";
  }
  return kOk;
}

/// Closed-form and ODE variance curves.
inline int run_variances(const RunConfig& cfg, std::ostream& os) {
  const auto dir = detail::output_dir(cfg);
  const auto closed = gaussian::squeezing_report(gaussian::closed_form_samples(cfg.alpha, cfg.t_max, cfg.output_step));
  const auto traj = gaussian::integrate_covariance(gaussian::build_moment_odes(cfg.alpha), cfg.t_max, cfg.solver_dt,
                                                   gaussian::CovSnapshot::vacuum(),
                                                   detail::steps_per_record(cfg.output_step, cfg.t_max, cfg.solver_dt));
  const auto ode = gaussian::squeezing_report(traj);
  {
    auto out = detail::open_output(dir / "variances_closed_form.csv");
    gaussian::write_variance_csv(out, closed.rows);
  }
  {
    auto out = detail::open_output(dir / "variances_ode.csv");
    gaussian::write_variance_csv(out, ode.rows);
  }
  os << "wrote " << (dir / "variances_closed_form.csv").string() << " (" << closed.rows.size() << " rows)\n";
  os << "wrote " << (dir / "variances_ode.csv").string() << " (" << ode.rows.size() << " rows)\n";
  os << "peak atomic squeezing " << gaussian::format_value(closed.peak_atomic_db) << " dB at t = "
     << gaussian::format_value(closed.peak_atomic_time) << "\n";
  return detail::report(os, {bounded("ode_vs_closed_form", ode_vs_closed_form(traj, cfg.alpha),
                                     cfg.tol.ode_rel * cfg.tol.scale)});
}

/// Finite-difference surfaces plus accuracy summary.
inline int run_pde(const RunConfig& cfg, std::ostream& os) {
  const auto dir = detail::output_dir(cfg);
  std::ostringstream summary;
  summary << "alpha=" << gaussian::format_value(cfg.alpha) << " t=" << gaussian::format_value(cfg.pde_time()) << "\n";
  const int code = detail::report(summary, detail::pde_checks(cfg, cfg.pde_grid, &os, &dir));
  auto out = detail::open_output(dir / "pde_summary.txt");
  out << summary.str();
  os << summary.str();
  return code;
}

/// Truncated-Fock oracle with error bars.
inline int run_oracle(const RunConfig& cfg, std::ostream& os) {
  const auto dir = detail::output_dir(cfg);
  const detail::OracleRun run = detail::run_oracle(detail::oracle_config(cfg, cfg.oracle_n_traj));
  {
    auto out = detail::open_output(dir / "oracle.csv");
    fock::write_oracle_csv(out, fock::oracle_rows(run.atoms, run.field_x, run.field_p));
  }
  os << "wrote " << (dir / "oracle.csv").string() << "\n";
  return detail::report(os, detail::oracle_checks(run, cfg.alpha, cfg.tol));
}

/// Every route at shared parameters.
inline int run_compare(const RunConfig& cfg, std::ostream& os) {
  const auto dir = detail::output_dir(cfg);
  std::vector<CheckResult> checks{check_series_product(), check_io_relations(), check_char_generator()};
  checks.push_back(check_ode_route(cfg.alpha, cfg.t_max, cfg.solver_dt, cfg.tol.ode_rel * cfg.tol.scale));
  pde::GridSpec grid = cfg.pde_grid;
  grid.dk = cfg.compare_pde_dk;
  grid.validate();
  for (auto& c : detail::pde_checks(cfg, grid, nullptr, nullptr)) checks.push_back(std::move(c));
  const detail::OracleRun run = detail::run_oracle(detail::oracle_config(cfg, cfg.compare_n_traj));
  for (auto& c : detail::oracle_checks(run, cfg.alpha, cfg.tol)) checks.push_back(std::move(c));

  std::ostringstream text;
  text << "compare alpha=" << gaussian::format_value(cfg.alpha) << " t_max=" << gaussian::format_value(cfg.t_max)
       << " seed=" << cfg.seed << "\n";
  const int code = detail::report(text, checks);
  auto out = detail::open_output(dir / "compare_report.txt");
  out << text.str();
  os << text.str();
  return code;
}

inline int run_command(const RunConfig& cfg, std::ostream& os) {
  if (cfg.command == "derive") return run_derive(cfg, os);
  if (cfg.command == "variances") return run_variances(cfg, os);
  if (cfg.command == "pde") return run_pde(cfg, os);
  if (cfg.command == "oracle") return run_oracle(cfg, os);
  if (cfg.command == "compare") return run_compare(cfg, os);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

/// run_command with the exception-to-exit-status mapping.
inline int run_guarded(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  try {
    cfg.validate();
    return run_command(cfg, os);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalFailure;
  }
}

}  // namespace qsc::app
