#pragma once

#include "qsc/fock/oracle.hpp"
#include "qsc/gaussian/squeezing.hpp"
#include "qsc/ito/char_fn_generator.hpp"
#include "qsc/ito/io_relations.hpp"
#include "qsc/pde/char_fn.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace qsc::app {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured deviation (0 for exact checks)
  double tolerance = 0.0;  // 0 means exact
  std::string detail;
};

inline std::string format_check(const CheckResult& c) {
  char buf[96];
  std::string line = (c.pass ? "PASS " : "FAIL ") + c.name;
  if (c.tolerance > 0.0) {
    std::snprintf(buf, sizeof buf, " value=%.6g tol=%.6g", c.value, c.tolerance);
    line += buf;
  } else {
    line += " exact";
  }
  if (!c.detail.empty()) line += " (" + c.detail + ")";
  return line;
}

inline CheckResult bounded(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), value <= tol, value, tol, std::move(detail)};
}

// --- symbolic --------------------------------------------------------------

inline CheckResult check_series_product() {
  const HPSystem composed = series_product(single_pass_p(), single_pass_x());
  const bool ok = composed == double_pass_system();
  return {"series_product", ok, 0.0, 0.0, ok ? "" : "got L = " + composed.L().to_string() + ", H = " + composed.H().to_string()};
}

/// The four relations and the output commutator, compared term by term with
///   dx_ph = dX_in + a p dt, dp_ph = dP_in - a x dt,
///   dx_at = a dP_in, dp_at = -a dX_in - a^2 p dt, [x_ph, p_ph] = i t.
inline CheckResult check_io_relations() {
  const FormalScalar a = FormalScalar::symbol(Symbol::alpha);
  const OpPoly x = OpPoly::x();
  const OpPoly p = OpPoly::p();
  const IORelations rels = output_quadrature_relations(double_pass_system());
  struct Expected {
    const IORelation* rel;
    OpPoly x_in, p_in, drift;
  };
  const Expected expected[] = {
      {&rels.x_ph, OpPoly(1), OpPoly{}, a * p},
      {&rels.p_ph, OpPoly{}, OpPoly(1), -a * x},
      {&rels.x_at, OpPoly{}, OpPoly(a), OpPoly{}},
      {&rels.p_at, OpPoly(-a), OpPoly{}, -(a * a) * p},
  };
  std::string bad;
  for (const auto& e : expected) {
    if (e.rel->input.x_in != e.x_in || e.rel->input.p_in != e.p_in || e.rel->drift != e.drift) {
      bad += (bad.empty() ? "" : "; ") + e.rel->algebraic_form;
    }
  }
  if (rels.output_commutator != FormalScalar::i() * FormalScalar::symbol(Symbol::t)) {
    bad += (bad.empty() ? "" : "; ") + std::string("commutator ") + rels.output_commutator.to_string();
  }
  return {"io_relations", bad.empty(), 0.0, 0.0, bad};
}

inline PdeCoefficients expected_char_coefficients(CharFamily family) {
  const FormalScalar a = FormalScalar::symbol(Symbol::alpha);
  const FormalScalar k = FormalScalar::symbol(Symbol::k);
  const FormalScalar l = FormalScalar::symbol(Symbol::l);
  const FormalScalar quarter = FormalScalar::rational(-1, 4);
  if (family == CharFamily::F) {
    const FormalScalar s = a * l - k;
    return {family, quarter * s * s, -a * s};
  }
  const FormalScalar s = a * l + k;
  return {family, quarter * s * s, -a * k};
}

inline CheckResult check_char_generator() {
  std::string bad;
  for (auto family : {CharFamily::F, CharFamily::G}) {
    const PdeCoefficients got = char_fn_generator(double_pass_system(), family);
    const PdeCoefficients want = expected_char_coefficients(family);
    if (got.c0 != want.c0 || got.c1 != want.c1) {
      bad += std::string(bad.empty() ? "" : "; ") + family_name(family) + ": c0 = " + got.c0.to_string() +
             ", c1 = " + got.c1.to_string();
    }
  }
  return {"char_fn_generator", bad.empty(), 0.0, 0.0, bad};
}

// --- Gaussian routes ---------------------------------------------------------

inline double relative_deviation(double got, double want) {
  const double diff = std::abs(got - want);
  return want == 0.0 ? diff : diff / std::abs(want);
}

/// Worst relative deviation of the six published entries between the ODE
/// route and the closed forms along one trajectory.
inline double ode_vs_closed_form(const gaussian::CovTrajectory& traj, double alpha) {
  double worst = 0.0;
  for (const auto& s : traj.snapshots) {
    const gaussian::CovSnapshot exact = gaussian::closed_form_covariances(alpha, s.t);
    for (std::size_t i = 0; i < gaussian::ModeBasis::size; ++i)
      for (std::size_t j = i; j < gaussian::ModeBasis::size; ++j)
        if (gaussian::is_published_entry(i, j)) worst = std::max(worst, relative_deviation(s(i, j), exact(i, j)));
  }
  return worst;
}

inline CheckResult check_ode_route(double alpha, double t_max, double dt, double tol) {
  const auto traj = gaussian::integrate_covariance(gaussian::build_moment_odes(alpha), t_max, dt);
  char detail[64];
  std::snprintf(detail, sizeof detail, "alpha=%g t_max=%g dt=%g", alpha, t_max, dt);
  return bounded("ode_vs_closed_form", ode_vs_closed_form(traj, alpha), tol, detail);
}

// --- PDE routes ----------------------------------------------------------------

/// Worst |moc - closed form| over a square (k, l) grid.
inline double moc_vs_closed_form(CharFamily family, double alpha, double t, double extent, double step) {
  const pde::CharPde eq(family, alpha);
  double worst = 0.0;
  const auto n = static_cast<int>(std::llround(2.0 * extent / step));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double k = -extent + i * step;
      const double l = -extent + j * step;
      worst = std::max(worst, std::abs(pde::moc_solve(eq, t, k, l) - pde::closed_form_char(family, alpha, t, k, l)));
    }
  return worst;
}

/// Worst |residual| of the closed form on a square (k, l) grid.
inline double closed_form_residual(CharFamily family, double alpha, double t, double extent, double step) {
  const pde::CharPde eq(family, alpha);
  const pde::Sampler sampler = [family, alpha](double tt, double k, double l) {
    return pde::closed_form_char(family, alpha, tt, k, l);
  };
  double worst = 0.0;
  const auto n = static_cast<int>(std::llround(2.0 * extent / step));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      worst = std::max(worst, std::abs(pde::pde_residual(eq, sampler, t, -extent + i * step, -extent + j * step)));
  return worst;
}

// --- oracle ------------------------------------------------------------------

/// |Var(y)/2 - sigma^2| in units of the standard error of Var(y)/2.
inline double sigma_distance(const fock::TrajectoryStats& s, double sigma2) {
  const double se = 0.5 * s.stderr_variance;
  return se > 0.0 ? std::abs(0.5 * s.variance - sigma2) / se : std::numeric_limits<double>::infinity();
}

}  // namespace qsc::app
