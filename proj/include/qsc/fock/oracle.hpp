#pragma once

#include "qsc/errors.hpp"
#include "qsc/gaussian/squeezing.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace qsc::fock {

using cplx = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Homodyne phase: x quadrature (0) or p quadrature (pi/2).
enum class HomodynePhase { x, p };

inline const char* phase_name(HomodynePhase ph) { return ph == HomodynePhase::x ? "0" : "pi/2"; }

/// Documented bound on the collision step.
inline constexpr double kMaxCouplingStep = 1e-2;  // alpha^2 dt
/// Population allowed in the top two atomic levels before we call it leakage.
inline constexpr double kTruncationLeakage = 1e-6;
/// Per-step trace deficit tolerated before renormalization.
inline constexpr double kTraceDeficit = 1e-8;

struct OracleConfig {
  double alpha = 0.3;
  double dt = 1e-3;
  double t = 1.0;
  std::size_t d_at = 40;
  std::size_t d_anc = 3;
  std::size_t n_traj = 2000;
  std::optional<std::uint64_t> seed;
  HomodynePhase phase = HomodynePhase::x;
  /// Keep every n-th step in the time series (the last step always).
  std::size_t record_every = 100;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t workers = 0;

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(std::ceil(t / dt - 1e-9))); }
  double step() const { return t / static_cast<double>(steps()); }

  void validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("oracle: alpha must be finite and >= 0");
    if (!(dt > 0.0)) throw ConfigError("oracle: dt must be positive");
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("oracle: t must be positive");
    if (dt > t) throw ConfigError("oracle: dt must not exceed t");
    if (d_at < 2) throw ConfigError("oracle: d_at must be >= 2");
    if (d_anc < 2) throw ConfigError("oracle: d_anc must be >= 2");
    if (alpha * alpha * dt > kMaxCouplingStep) {
      throw ConfigError("oracle: alpha^2 dt = " + std::to_string(alpha * alpha * dt) + " exceeds 1e-2");
    }
    if (record_every == 0) throw ConfigError("oracle: record_every must be positive");
  }
};

// --- truncated operators ---------------------------------------------------

inline DenseOperator annihilation(std::size_t d) {
  DenseOperator a = DenseOperator::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t n = 1; n < d; ++n) a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(double(n));
  return a;
}

inline DenseOperator position(std::size_t d) {
  const DenseOperator a = annihilation(d);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

inline DenseOperator momentum(std::size_t d) {
  const DenseOperator a = annihilation(d);
  return (a - a.adjoint()) / cplx(0.0, std::sqrt(2.0));
}

inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// exp(-i theta G) for Hermitian G.
inline DenseOperator expm_hermitian(const DenseOperator& g, double theta) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(g);
  if (es.info() != Eigen::Success) throw NumericalError("expm_hermitian: eigendecomposition failed");
  const Eigen::VectorXcd phases =
      es.eigenvalues().unaryExpr([theta](double lam) { return std::exp(cplx(0.0, -theta * lam)); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Largest entry of U^dag U - I with the atom restricted to its lower
/// d_at - 2 levels.
inline double lower_block_unitarity_defect(const DenseOperator& u, std::size_t d_at, std::size_t d_anc) {
  const DenseOperator g = u.adjoint() * u - DenseOperator::Identity(u.rows(), u.cols());
  const auto n = static_cast<Eigen::Index>((d_at - 2) * d_anc);
  return g.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

struct StepUnitaries {
  DenseOperator pass1;
  DenseOperator pass2;
  DenseOperator composite;  // pass2 * pass1
};

/// Collision step on atom (x) ancilla. Pass 1 couples p to the ancilla P
/// quadrature, pass 2 couples x to X; pass 1 acts first.
inline StepUnitaries step_unitaries(double alpha, double dt, std::size_t d_at, std::size_t d_anc) {
  if (d_at < 2 || d_anc < 2) throw ConfigError("step_unitaries: dimensions must be >= 2");
  if (!(dt > 0.0)) throw ConfigError("step_unitaries: dt must be positive");
  if (alpha * alpha * dt > kMaxCouplingStep) throw ConfigError("step_unitaries: alpha^2 dt exceeds 1e-2");
  const double theta = std::sqrt(dt) * alpha;
  StepUnitaries u;
  u.pass1 = expm_hermitian(kron(momentum(d_at), momentum(d_anc)), theta);
  u.pass2 = expm_hermitian(kron(position(d_at), position(d_anc)), theta);
  u.composite = u.pass2 * u.pass1;
  return u;
}

/// K_j = <j|U|0> on the atom.
inline std::vector<DenseOperator> kraus_operators(const DenseOperator& u, std::size_t d_at, std::size_t d_anc) {
  std::vector<DenseOperator> k(d_anc, DenseOperator::Zero(static_cast<Eigen::Index>(d_at), static_cast<Eigen::Index>(d_at)));
  for (std::size_t j = 0; j < d_anc; ++j)
    for (std::size_t r = 0; r < d_at; ++r)
      for (std::size_t c = 0; c < d_at; ++c)
        k[j](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            u(static_cast<Eigen::Index>(r * d_anc + j), static_cast<Eigen::Index>(c * d_anc));
  return k;
}

// Population of the top two levels.
inline double top_population(const StateVector& psi) {
  const Eigen::Index n = psi.size();
  return std::norm(psi(n - 1)) + std::norm(psi(n - 2));
}

inline double top_population(const DenseOperator& rho) {
  const Eigen::Index n = rho.rows();
  return std::abs(rho(n - 1, n - 1).real()) + std::abs(rho(n - 2, n - 2).real());
}

inline void check_leakage(double pop, double t) {
  if (pop > kTruncationLeakage) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "truncation leakage: top-level population %.3g at t = %.6g (limit %.0e)", pop, t,
                  kTruncationLeakage);
    throw NumericalError(buf);
  }
}

inline void check_deficit(double trace, double t) {
  if (std::abs(1.0 - trace) > kTraceDeficit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "trace deficit %.3g at t = %.6g", 1.0 - trace, t);
    throw NumericalError(buf);
  }
}

// --- deterministic atom moments ---------------------------------------------

struct AtomMoments {
  double t = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
};

inline AtomMoments atom_moments(const DenseOperator& rho, const DenseOperator& x, const DenseOperator& p, double t) {
  AtomMoments m;
  m.t = t;
  m.mean_x = (rho * x).trace().real();
  m.mean_p = (rho * p).trace().real();
  m.var_x = (rho * x * x).trace().real() - m.mean_x * m.mean_x;
  m.var_p = (rho * p * p).trace().real() - m.mean_p * m.mean_p;
  return m;
}

/// Ancilla traced exactly each step: rho -> sum_j K_j rho K_j^dag.
inline std::vector<AtomMoments> simulate_atom_moments(const OracleConfig& cfg) {
  cfg.validate();
  const std::size_t steps = cfg.steps();
  const double h = cfg.step();
  const auto k = kraus_operators(step_unitaries(cfg.alpha, h, cfg.d_at, cfg.d_anc).composite, cfg.d_at, cfg.d_anc);
  const DenseOperator x = position(cfg.d_at);
  const DenseOperator p = momentum(cfg.d_at);

  const auto d = static_cast<Eigen::Index>(cfg.d_at);
  DenseOperator rho = DenseOperator::Zero(d, d);
  rho(0, 0) = 1.0;
  std::vector<AtomMoments> out{atom_moments(rho, x, p, 0.0)};
  DenseOperator next(d, d);
  for (std::size_t n = 1; n <= steps; ++n) {
    next.setZero();
    for (const auto& kj : k) next.noalias() += kj * rho * kj.adjoint();
    const double t = static_cast<double>(n) * h;
    const double tr = next.trace().real();
    check_deficit(tr, t);
    rho = next / tr;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    check_leakage(top_population(rho), t);
    if (n % cfg.record_every == 0 || n == steps) out.push_back(atom_moments(rho, x, p, t));
  }
  return out;
}

// --- homodyne Monte Carlo -----------------------------------------------------

/// Ensemble statistics of the integrated record y_t at one instant.
struct TrajectoryStats {
  double t = 0.0;
  double mean = 0.0;
  double variance = 0.0;        // unbiased sample variance
  double stderr_mean = 0.0;     // sd / sqrt(N)
  double stderr_variance = 0.0; // from the sample fourth central moment
  std::size_t n = 0;
};

/// Measurement operators M_m = sum_j conj(e_m[j]) K_j for the eigenbasis e_m
/// of the truncated ancilla quadrature, with outcomes q_m.
struct HomodyneInstrument {
  std::vector<DenseOperator> ops;
  std::vector<double> outcomes;
};

inline HomodyneInstrument homodyne_instrument(const std::vector<DenseOperator>& kraus, std::size_t d_anc, HomodynePhase ph) {
  const DenseOperator q = ph == HomodynePhase::x ? position(d_anc) : momentum(d_anc);
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(q);
  if (es.info() != Eigen::Success) throw NumericalError("homodyne_instrument: eigendecomposition failed");
  HomodyneInstrument inst;
  for (Eigen::Index m = 0; m < es.eigenvalues().size(); ++m) {
    DenseOperator op = DenseOperator::Zero(kraus[0].rows(), kraus[0].cols());
    for (std::size_t j = 0; j < d_anc; ++j) op += std::conj(es.eigenvectors()(static_cast<Eigen::Index>(j), m)) * kraus[j];
    inst.ops.push_back(std::move(op));
    inst.outcomes.push_back(es.eigenvalues()(m));
  }
  return inst;
}

namespace detail {

// Record samples of one trajectory at the recorded step indices.
inline std::vector<double> run_trajectory(const HomodyneInstrument& inst, const std::vector<std::size_t>& record_steps,
                                          std::size_t steps, double h, std::size_t d_at, std::uint64_t seed,
                                          std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(d_at));
  psi(0) = 1.0;
  std::vector<StateVector> branch(inst.ops.size());
  std::vector<double> prob(inst.ops.size());
  std::vector<double> samples;
  samples.reserve(record_steps.size());
  const double gain = std::sqrt(h) * std::sqrt(2.0);
  double y = 0.0;
  std::size_t next_record = 0;
  for (std::size_t n = 1; n <= steps; ++n) {
    double total = 0.0;
    for (std::size_t m = 0; m < inst.ops.size(); ++m) {
      branch[m].noalias() = inst.ops[m] * psi;
      prob[m] = branch[m].squaredNorm();
      total += prob[m];
    }
    const double t = static_cast<double>(n) * h;
    check_deficit(total, t);
    double r = uniform(rng) * total;
    std::size_t pick = 0;
    while (pick + 1 < prob.size() && r >= prob[pick]) {
      r -= prob[pick];
      ++pick;
    }
    psi = branch[pick] / std::sqrt(prob[pick]);
    y += gain * inst.outcomes[pick];
    check_leakage(top_population(psi), t);
    if (next_record < record_steps.size() && record_steps[next_record] == n) {
      samples.push_back(y);
      ++next_record;
    }
  }
  return samples;
}

}  // namespace detail

/// Integrated homodyne record y_t = sum sqrt(dt) sqrt2 q over an ensemble.
/// Var(y_t) estimates 2 sigma^2 of the measured output quadrature. One
/// series entry per recorded time (t = 0 excluded).
inline std::vector<TrajectoryStats> homodyne_monte_carlo(const OracleConfig& cfg) {
  cfg.validate();
  if (!cfg.seed) throw ConfigError("oracle: homodyne Monte Carlo needs an explicit seed");
  if (cfg.n_traj < 100) throw ConfigError("oracle: n_traj must be >= 100");
  const std::size_t steps = cfg.steps();
  const double h = cfg.step();
  const auto kraus = kraus_operators(step_unitaries(cfg.alpha, h, cfg.d_at, cfg.d_anc).composite, cfg.d_at, cfg.d_anc);
  const HomodyneInstrument inst = homodyne_instrument(kraus, cfg.d_anc, cfg.phase);

  std::vector<std::size_t> record_steps;
  for (std::size_t n = 1; n <= steps; ++n)
    if (n % cfg.record_every == 0 || n == steps) record_steps.push_back(n);

  // Each trajectory owns its RNG stream and its output slot, so the result
  // does not depend on how indices are spread over workers.
  std::vector<std::vector<double>> samples(cfg.n_traj);
  std::size_t workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.n_traj);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < cfg.n_traj; i += workers)
        samples[i] = detail::run_trajectory(inst, record_steps, steps, h, cfg.d_at, *cfg.seed, i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Reduction in index order.
  std::vector<TrajectoryStats> out;
  const double n = static_cast<double>(cfg.n_traj);
  for (std::size_t r = 0; r < record_steps.size(); ++r) {
    TrajectoryStats s;
    s.t = static_cast<double>(record_steps[r]) * h;
    s.n = cfg.n_traj;
    double sum = 0.0;
    for (const auto& v : samples) sum += v[r];
    s.mean = sum / n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (const auto& v : samples) {
      const double d2 = (v[r] - s.mean) * (v[r] - s.mean);
      m2 += d2;
      m4 += d2 * d2;
    }
    s.variance = m2 / (n - 1.0);
    m2 /= n;
    m4 /= n;
    s.stderr_mean = std::sqrt(s.variance / n);
    // Var(s^2) ~ (mu4 - mu2^2 (n-3)/(n-1)) / n
    s.stderr_variance = std::sqrt(std::max(0.0, (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n));
    out.push_back(s);
  }
  return out;
}

// --- CSV -----------------------------------------------------------------------

/// Oracle rows use the variance schema; entries the oracle does not produce
/// (the atom-field cross covariances) are nan.
struct OracleRow {
  gaussian::VarianceRow values;
  double stderr_var_x_ph_norm = 0.0;
  double stderr_var_p_ph_norm = 0.0;
  std::size_t n_traj = 0;
};

inline const char* kOracleCsvHeader =
    "t,var_p_at,cov_pat_xph,var_x_ph_norm,var_x_at,cov_xat_pph,var_p_ph_norm,sq_db_atom,sq_db_field_x,"
    "sq_db_field_p,unc_prod_field,unc_prod_atom,stderr_var_x_ph_norm,stderr_var_p_ph_norm,n_traj";

namespace detail {

inline double db_or_nan(double v) { return v > 0.0 ? gaussian::squeezing_db(v) : std::numeric_limits<double>::quiet_NaN(); }

}  // namespace detail

/// Combine the deterministic atom run with the two homodyne runs. All three
/// series must share their time grid.
inline std::vector<OracleRow> oracle_rows(const std::vector<AtomMoments>& atoms, const std::vector<TrajectoryStats>& field_x,
                                          const std::vector<TrajectoryStats>& field_p) {
  if (atoms.size() != field_x.size() + 1 || field_x.size() != field_p.size())
    throw InvalidInput("oracle_rows: series lengths do not match");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<OracleRow> rows;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    OracleRow row;
    auto& v = row.values;
    v.t = atoms[i].t;
    v.var_p_at = atoms[i].var_p;
    v.var_x_at = atoms[i].var_x;
    v.cov_pat_xph = nan;
    v.cov_xat_pph = nan;
    if (i == 0) {
      v.var_x_ph_norm = v.var_p_ph_norm = gaussian::kReferenceVariance;
      row.stderr_var_x_ph_norm = row.stderr_var_p_ph_norm = 0.0;
      row.n_traj = field_x.empty() ? 0 : field_x.front().n;
    } else {
      const auto& fx = field_x[i - 1];
      const auto& fp = field_p[i - 1];
      if (std::abs(fx.t - v.t) > 1e-9 || std::abs(fp.t - v.t) > 1e-9) throw InvalidInput("oracle_rows: time grids differ");
      // Var(y)/2 = sigma^2, normalized by t.
      v.var_x_ph_norm = fx.variance / (2.0 * v.t);
      v.var_p_ph_norm = fp.variance / (2.0 * v.t);
      row.stderr_var_x_ph_norm = fx.stderr_variance / (2.0 * v.t);
      row.stderr_var_p_ph_norm = fp.stderr_variance / (2.0 * v.t);
      row.n_traj = fx.n;
    }
    v.sq_db_atom = detail::db_or_nan(v.var_p_at);
    v.sq_db_field_x = detail::db_or_nan(v.var_x_ph_norm);
    v.sq_db_field_p = detail::db_or_nan(v.var_p_ph_norm);
    v.unc_prod_field = v.var_x_ph_norm * v.var_p_ph_norm;
    v.unc_prod_atom = v.var_x_at * v.var_p_at;
    rows.push_back(row);
  }
  return rows;
}

inline void write_oracle_csv(std::ostream& os, const std::vector<OracleRow>& rows) {
  os << kOracleCsvHeader << "\n";
  for (const auto& r : rows) {
    gaussian::write_variance_row(os, r.values);
    os << "," << gaussian::format_value(r.stderr_var_x_ph_norm) << "," << gaussian::format_value(r.stderr_var_p_ph_norm)
       << "," << r.n_traj << "\n";
  }
}

}  // namespace qsc::fock
