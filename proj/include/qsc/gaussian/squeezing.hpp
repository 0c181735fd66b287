#pragma once

#include "qsc/gaussian/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace qsc::gaussian {

/// Vacuum / ground-state variance every squeezing figure is referred to.
inline constexpr double kReferenceVariance = 0.5;

inline double squeezing_db(double variance) {
  if (!(variance > 0.0)) throw InvalidInput("squeezing needs a positive variance, got " + std::to_string(variance));
  return 10.0 * std::log10(kReferenceVariance / variance);
}

/// One row of the variance CSV.
struct VarianceRow {
  double t = 0.0;
  double var_p_at = 0.0;
  double cov_pat_xph = 0.0;
  double var_x_ph_norm = 0.0;
  double var_x_at = 0.0;
  double cov_xat_pph = 0.0;
  double var_p_ph_norm = 0.0;
  double sq_db_atom = 0.0;
  double sq_db_field_x = 0.0;
  double sq_db_field_p = 0.0;
  double unc_prod_field = 0.0;
  double unc_prod_atom = 0.0;
};

struct SqueezingReport {
  std::vector<VarianceRow> rows;
  double peak_atomic_db = -std::numeric_limits<double>::infinity();
  double peak_atomic_time = 0.0;
};

/// Build a row from a snapshot. Normalized field variances at t = 0 take
/// their vacuum limit 1/2.
inline VarianceRow variance_row(const CovSnapshot& s) {
  VarianceRow r;
  r.t = s.t;
  r.var_p_at = s.var_p_at();
  r.cov_pat_xph = s.cov_pat_xph();
  r.var_x_at = s.var_x_at();
  r.cov_xat_pph = s.cov_xat_pph();
  if (s.t > 0.0) {
    r.var_x_ph_norm = s.var_x_ph() / s.t;
    r.var_p_ph_norm = s.var_p_ph() / s.t;
  } else {
    r.var_x_ph_norm = kReferenceVariance;
    r.var_p_ph_norm = kReferenceVariance;
  }
  r.sq_db_atom = squeezing_db(r.var_p_at);
  r.sq_db_field_x = squeezing_db(r.var_x_ph_norm);
  r.sq_db_field_p = squeezing_db(r.var_p_ph_norm);
  r.unc_prod_field = r.var_x_ph_norm * r.var_p_ph_norm;
  r.unc_prod_atom = r.var_x_at * r.var_p_at;
  return r;
}

/// Squeezing figures for a sampled trajectory (ODE route or closed-form
/// samples alike).
inline SqueezingReport squeezing_report(const std::vector<CovSnapshot>& samples) {
  SqueezingReport report;
  report.rows.reserve(samples.size());
  for (const auto& s : samples) {
    VarianceRow r = variance_row(s);
    if (r.sq_db_atom > report.peak_atomic_db) {
      report.peak_atomic_db = r.sq_db_atom;
      report.peak_atomic_time = r.t;
    }
    report.rows.push_back(r);
  }
  return report;
}

inline SqueezingReport squeezing_report(const CovTrajectory& traj) { return squeezing_report(traj.snapshots); }

/// Closed-form samples on a uniform grid t = 0, step, ..., t_max.
inline std::vector<CovSnapshot> closed_form_samples(double alpha, double t_max, double step) {
  if (!(step > 0.0)) throw ConfigError("sample step must be positive");
  const auto n = static_cast<std::size_t>(std::llround(std::ceil(t_max / step - 1e-9)));
  std::vector<CovSnapshot> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = i == n ? t_max : static_cast<double>(i) * step;
    out.push_back(closed_form_covariances(alpha, t));
  }
  return out;
}

inline const char* kVarianceCsvHeader =
    "t,var_p_at,cov_pat_xph,var_x_ph_norm,var_x_at,cov_xat_pph,var_p_ph_norm,sq_db_atom,sq_db_field_x,"
    "sq_db_field_p,unc_prod_field,unc_prod_atom";

/// Decimal with 12 significant digits ("nan" for unavailable values).
inline std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_variance_row(std::ostream& os, const VarianceRow& r) {
  const double values[] = {r.t,           r.var_p_at,      r.cov_pat_xph,   r.var_x_ph_norm,
                           r.var_x_at,    r.cov_xat_pph,   r.var_p_ph_norm, r.sq_db_atom,
                           r.sq_db_field_x, r.sq_db_field_p, r.unc_prod_field, r.unc_prod_atom};
  bool first = true;
  for (double v : values) {
    os << (first ? "" : ",") << format_value(v);
    first = false;
  }
}

inline void write_variance_csv(std::ostream& os, const std::vector<VarianceRow>& rows) {
  os << kVarianceCsvHeader << "\n";
  for (const auto& r : rows) {
    write_variance_row(os, r);
    os << "\n";
  }
}

}  // namespace qsc::gaussian
