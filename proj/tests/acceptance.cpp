// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "qsc/app/checks.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace qsc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

int failures = 0;

void criterion(int n, const char* what, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0.0 && secs > budget_s) {
    o.pass = false;
    o.detail += fmt(" over budget %.0f s", budget_s);
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", n, what, o.detail.c_str(), secs);
  std::fflush(stdout);
}

Outcome from_check(const app::CheckResult& c) { return {c.pass, c.pass ? "exact match" : c.detail}; }

// -- 4 ----------------------------------------------------------------------
Outcome ode_route() {
  double worst = 0.0;
  for (double alpha : {0.3, 1.0, 2.0}) {
    const auto traj = gaussian::integrate_covariance(gaussian::build_moment_odes(alpha), 5.0, 1e-4,
                                                     gaussian::CovSnapshot::vacuum(), 100);
    worst = std::max(worst, app::ode_vs_closed_form(traj, alpha));
  }
  return {worst < 1e-8, fmt("worst relative deviation %.3g (< 1e-8)", worst)};
}

// -- 5 ----------------------------------------------------------------------
Outcome three_db() {
  const double bound = 10.0 * std::log10(2.0);
  double peak = -1e300;
  // alpha = 1 so alpha^2 t = t; closed form on a fine grid and the ODE route
  const auto closed = gaussian::squeezing_report(gaussian::closed_form_samples(1.0, 20.0, 0.01));
  const auto ode = gaussian::squeezing_report(
      gaussian::integrate_covariance(gaussian::build_moment_odes(1.0), 20.0, 1e-3, gaussian::CovSnapshot::vacuum(), 10));
  peak = std::max(closed.peak_atomic_db, ode.peak_atomic_db);
  // other couplings reach the same alpha^2 t range
  for (double alpha : {0.5, 2.0}) {
    const auto r = gaussian::squeezing_report(gaussian::closed_form_samples(alpha, 20.0 / (alpha * alpha), 0.01));
    peak = std::max(peak, r.peak_atomic_db);
  }
  const bool ok = std::abs(peak - bound) < 0.02 && peak <= bound + 1e-12;
  return {ok, fmt("peak %.6f dB vs 10 log10 2 = %.6f dB", peak, bound)};
}

// -- 6 ----------------------------------------------------------------------
Outcome field_squeezing() {
  const auto closed = gaussian::closed_form_covariances(1.0, 100.0);
  const double db = gaussian::squeezing_db(closed.var_x_ph() / 100.0);
  const auto traj = gaussian::integrate_covariance(gaussian::build_moment_odes(1.0), 100.0, 1e-2);
  const double rel = app::relative_deviation(traj.back().var_x_ph(), closed.var_x_ph());
  return {db >= 18.0 && rel < 1e-6, fmt("closed form %.4f dB (>= 18), ODE relative deviation %.3g (< 1e-6)", db, rel)};
}

// -- 7 ----------------------------------------------------------------------
Outcome non_minimum() {
  double smallest = 1e300;
  bool at_zero = false;
  for (double alpha : {0.3, 1.0, 2.0}) {
    const auto report = gaussian::squeezing_report(gaussian::closed_form_samples(alpha, 20.0, 0.01));
    at_zero = report.rows.front().t == 0.0 && report.rows.front().unc_prod_field == 0.25;
    if (!at_zero) break;
    for (std::size_t n = 1; n < report.rows.size(); ++n) smallest = std::min(smallest, report.rows[n].unc_prod_field);
  }
  return {at_zero && smallest > 0.25, fmt("product 0.25 at t = 0, min over t > 0 is %.12g", smallest)};
}

// -- 8 ----------------------------------------------------------------------
Outcome pde_routes() {
  double moc = 0.0;
  for (double alpha : {0.5, 1.0, 2.0})
    for (double t : {0.1, 1.0, 3.0})
      for (auto family : {CharFamily::F, CharFamily::G})
        moc = std::max(moc, app::moc_vs_closed_form(family, alpha, t, 3.0, 0.25));

  // orders from dl = 0.04 -> 0.02 -> 0.01; independent k-slices, so a coarse dk suffices
  double order_lo = 1e9, order_hi = -1e9, full_error = 0.0, residual = 0.0;
  for (auto family : {CharFamily::F, CharFamily::G}) {
    const pde::CharPde eq(family, 1.0);
    const auto study = pde::fd_convergence(eq, pde::GridSpec{-8.0, 8.0, 0.25, -8.0, 8.0, 0.04}, 0.5, 3);
    for (double o : study.observed_order) {
      order_lo = std::min(order_lo, o);
      order_hi = std::max(order_hi, o);
    }
    const pde::CharSurface full = pde::fd_solve(eq, pde::GridSpec{}, 0.5);
    full_error = std::max(full_error, pde::max_error_vs_closed_form(full));
    residual = std::max(residual, app::closed_form_residual(family, 1.0, 0.5, 3.0, 0.25));
  }
  const bool ok = moc < 1e-10 && order_lo >= 1.8 && order_hi <= 2.2 && full_error < 5e-4 && residual < 1e-6;
  std::string d = fmt("moc %.3g (< 1e-10), fd order [%.3f, %.3f], ", moc, order_lo, order_hi);
  d += fmt("fd error at dl 0.02 %.3g (< 5e-4), residual %.3g (< 1e-6)", full_error, residual);
  return {ok, d};
}

// -- 9 ----------------------------------------------------------------------
Outcome oracle_atoms() {
  fock::OracleConfig c;
  c.alpha = 0.3;
  c.t = 1.0;
  c.dt = 1e-3;
  c.d_at = 40;
  const auto exact = gaussian::closed_form_covariances(0.3, 1.0);
  auto errors = [&](double dt) {
    c.dt = dt;
    const auto m = fock::simulate_atom_moments(c).back();
    return std::make_pair(app::relative_deviation(m.var_p, exact.var_p_at()),
                          app::relative_deviation(m.var_x, exact.var_x_at()));
  };
  const auto coarse = errors(1e-3);
  const auto fine = errors(5e-4);
  const double ratio = coarse.first / fine.first;
  const bool ok = coarse.first < 0.02 && coarse.second < 0.02 && std::abs(ratio - 2.0) <= 0.6;
  std::string d = fmt("var_p rel %.3g, var_x rel %.3g (< 0.02), ", coarse.first, coarse.second);
  d += fmt("var_p error ratio dt/(dt/2) %.3f (2 +- 30%%)", ratio);
  return {ok, d};
}

// -- 10 ---------------------------------------------------------------------
Outcome oracle_field() {
  fock::OracleConfig c;
  c.alpha = 0.5;
  c.t = 1.0;
  c.dt = 1e-3;
  c.d_at = 20;
  c.n_traj = 2000;
  c.seed = 20240611;
  c.record_every = 1000;
  const auto exact = gaussian::closed_form_covariances(0.5, 1.0);
  c.phase = fock::HomodynePhase::x;
  const double zx = app::sigma_distance(fock::homodyne_monte_carlo(c).back(), exact.var_x_ph());
  c.phase = fock::HomodynePhase::p;
  c.seed = 20240612;
  const double zp = app::sigma_distance(fock::homodyne_monte_carlo(c).back(), exact.var_p_ph());
  c.alpha = 0.0;
  c.phase = fock::HomodynePhase::x;
  c.seed = 20240613;
  const auto ctrl = fock::homodyne_monte_carlo(c).back();
  const double zc = std::abs(ctrl.variance - ctrl.t) / ctrl.stderr_variance;
  return {zx < 5.0 && zp < 5.0 && zc < 5.0,
          fmt("phi=0 %.2f sigma, phi=pi/2 %.2f sigma, alpha=0 control %.2f sigma (< 5)", zx, zp, zc)};
}

// -- 11 ---------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<int, std::string> run_cli(const std::string& args) {
  FILE* pipe = popen((std::string(QSC_CLI) + " " + args).c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "qsc_acceptance";
  fs::remove_all(root);
  const fs::path a = root / "a";
  const fs::path b = root / "b";
  const auto ra = run_cli("compare --out " + a.string());
  const auto rb = run_cli("compare --out " + b.string());
  const bool files_equal = fs::exists(a / "compare_report.txt") &&
                           slurp(a / "compare_report.txt") == slurp(b / "compare_report.txt");
  const bool ok = ra.first == 0 && rb.first == 0 && ra.second == rb.second && files_equal;
  std::string d = "exit codes " + std::to_string(ra.first) + "/" + std::to_string(rb.first);
  d += ra.second == rb.second ? ", stdout identical" : ", stdout differs";
  d += files_equal ? ", report identical" : ", report differs";
  return {ok, d};
}

}  // namespace

int main() {
  criterion(1, "series product", 1.0, [] { return from_check(app::check_series_product()); });
  criterion(2, "I/O relations", 1.0, [] { return from_check(app::check_io_relations()); });
  criterion(3, "characteristic-function generator", 1.0, [] { return from_check(app::check_char_generator()); });
  criterion(4, "closed form vs ODE route", 10.0, ode_route);
  criterion(5, "3 dB atomic bound", 0.0, three_db);
  criterion(6, "field squeezing at alpha^2 t = 100", 0.0, field_squeezing);
  criterion(7, "non-minimum uncertainty", 0.0, non_minimum);
  criterion(8, "PDE routes", 60.0, pde_routes);
  criterion(9, "Fock oracle atoms", 300.0, oracle_atoms);
  criterion(10, "Fock oracle field", 600.0, oracle_field);
  criterion(11, "compare determinism", 0.0, determinism);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
