#pragma once

#include "qsc/errors.hpp"
#include "qsc/gaussian/moment_model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace qsc::gaussian {

struct LinearOde {
  double alpha = 0.0;
  Eigen::Matrix4d drift = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d diffusion = Eigen::Matrix4d::Zero();
};

/// Numeric moment equations for a given coupling, from the symbolic model.
inline LinearOde build_moment_odes(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be a finite nonnegative number");
  const SymbolicMomentModel& model = double_pass_moment_model();
  return {alpha, instantiate(model.drift, alpha), instantiate(model.diffusion, alpha)};
}

/// Symmetrized second moments and means at one instant.
struct CovSnapshot {
  double t = 0.0;
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  /// Entries not produced by a route are NaN and flagged false here.
  Eigen::Matrix<bool, 4, 4> available = Eigen::Matrix<bool, 4, 4>::Constant(true);

  double operator()(std::size_t i, std::size_t j) const {
    return cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double var_p_at() const { return (*this)(ModeBasis::p_at, ModeBasis::p_at); }
  double cov_pat_xph() const { return (*this)(ModeBasis::p_at, ModeBasis::x_ph); }
  double var_x_ph() const { return (*this)(ModeBasis::x_ph, ModeBasis::x_ph); }
  double var_x_at() const { return (*this)(ModeBasis::x_at, ModeBasis::x_at); }
  double cov_xat_pph() const { return (*this)(ModeBasis::x_at, ModeBasis::p_ph); }
  double var_p_ph() const { return (*this)(ModeBasis::p_ph, ModeBasis::p_ph); }

  /// det of the atomic block; >= 1/4 for a physical state.
  double atomic_uncertainty() const {
    return var_x_at() * var_p_at() - std::pow((*this)(ModeBasis::x_at, ModeBasis::p_at), 2);
  }

  static CovSnapshot vacuum() {
    CovSnapshot s;
    s.cov(0, 0) = 0.5;
    s.cov(1, 1) = 0.5;
    return s;
  }
};

/// True for the six (co)variances that have published closed forms.
inline bool is_published_entry(std::size_t i, std::size_t j) {
  const std::size_t lo = std::min(i, j);
  const std::size_t hi = std::max(i, j);
  using M = ModeBasis;
  return (lo == M::p_at && hi == M::p_at) || (lo == M::p_at && hi == M::x_ph) || (lo == M::x_ph && hi == M::x_ph) ||
         (lo == M::x_at && hi == M::x_at) || (lo == M::x_at && hi == M::p_ph) || (lo == M::p_ph && hi == M::p_ph);
}

struct CovTrajectory {
  std::vector<CovSnapshot> snapshots;

  double step() const { return snapshots.size() < 2 ? 0.0 : snapshots[1].t - snapshots[0].t; }
  const CovSnapshot& back() const { return snapshots.back(); }
};

/// Largest stable step of the fixed-step integrator.
inline double max_stable_step(double alpha) {
  return alpha == 0.0 ? std::numeric_limits<double>::infinity() : 0.1 / (alpha * alpha);
}

/// Classical RK4 on (mean, Cov) from `initial`. The grid is uniform with
/// spacing t_max/ceil(t_max/dt); every `record_every`-th step is kept, and
/// the final time is always recorded.
inline CovTrajectory integrate_covariance(const LinearOde& ode, double t_max, double dt,
                                          const CovSnapshot& initial = CovSnapshot::vacuum(),
                                          std::size_t record_every = 1) {
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be nonnegative");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (t_max > 0.0 && dt > t_max) throw ConfigError("dt must not exceed t_max");
  if (dt > max_stable_step(ode.alpha)) {
    throw ConfigError("dt = " + std::to_string(dt) + " exceeds the stability bound 0.1/alpha^2 = " +
                      std::to_string(max_stable_step(ode.alpha)));
  }
  if (record_every == 0) throw ConfigError("record_every must be positive");

  CovTrajectory traj;
  CovSnapshot state = initial;
  state.t = 0.0;
  traj.snapshots.push_back(state);
  if (t_max == 0.0) return traj;

  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  const double h = t_max / static_cast<double>(steps);
  const Eigen::Matrix4d& A = ode.drift;
  const Eigen::Matrix4d& D = ode.diffusion;
  auto cov_rate = [&](const Eigen::Matrix4d& c) -> Eigen::Matrix4d { return A * c + c * A.transpose() + D; };

  Eigen::Matrix4d cov = initial.cov;
  Eigen::Vector4d mean = initial.mean;
  for (std::size_t n = 1; n <= steps; ++n) {
    const Eigen::Matrix4d k1 = cov_rate(cov);
    const Eigen::Matrix4d k2 = cov_rate(cov + 0.5 * h * k1);
    const Eigen::Matrix4d k3 = cov_rate(cov + 0.5 * h * k2);
    const Eigen::Matrix4d k4 = cov_rate(cov + h * k3);
    cov += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    cov = 0.5 * (cov + cov.transpose()).eval();

    const Eigen::Vector4d m1 = A * mean;
    const Eigen::Vector4d m2 = A * (mean + 0.5 * h * m1);
    const Eigen::Vector4d m3 = A * (mean + 0.5 * h * m2);
    const Eigen::Vector4d m4 = A * (mean + h * m3);
    mean += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);

    if (n % record_every == 0 || n == steps) {
      CovSnapshot s;
      s.t = static_cast<double>(n) * h;
      s.cov = cov;
      s.mean = mean;
      traj.snapshots.push_back(s);
    }
  }
  return traj;
}

namespace detail {

// (1 - e^{-x})/x with the x -> 0 limit.
inline double one_minus_exp_over(double x) { return x == 0.0 ? 1.0 : -std::expm1(-x) / x; }

}  // namespace detail

/// The six published (co)variances. They are evaluated through the
/// identities 1 + e^{-2y} - 2e^{-y} = u^2 and 3 + e^{-2y} - 4e^{-y} = 2u + u^2
/// with y = alpha^2 t, u = 1 - e^{-y}, which keeps alpha -> 0 finite.
inline CovSnapshot closed_form_covariances(double alpha, double t) {
  if (!(alpha >= 0.0) || !(t >= 0.0)) throw InvalidInput("closed_form_covariances needs alpha >= 0 and t >= 0");
  const double a2 = alpha * alpha;
  const double y = a2 * t;
  const double u = -std::expm1(-y);
  const double u_over_a2 = t * detail::one_minus_exp_over(y);  // u / alpha^2

  CovSnapshot s;
  s.t = t;
  s.cov.setConstant(std::numeric_limits<double>::quiet_NaN());
  s.available.setConstant(false);
  auto set = [&s](std::size_t i, std::size_t j, double v) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    s.cov(a, b) = s.cov(b, a) = v;
    s.available(a, b) = s.available(b, a) = true;
  };
  using M = ModeBasis;
  set(M::p_at, M::p_at, 0.25 * (1.0 + std::exp(-2.0 * y)));
  set(M::p_at, M::x_ph, -0.25 * alpha * u_over_a2 * u);  // -(1/(4 alpha)) u^2
  set(M::x_ph, M::x_ph, 0.25 * u_over_a2 * (2.0 + u));
  set(M::x_at, M::x_at, 0.5 * (1.0 + y));
  set(M::x_at, M::p_ph, -0.25 * alpha * a2 * t * t);
  set(M::p_ph, M::p_ph, 0.5 * t + a2 * a2 * t * t * t / 6.0);
  return s;
}

/// Normalized field variances (sigma^2_x / t, sigma^2_p / t).
struct NormalizedFieldVariances {
  double x;
  double p;
};

/// Continuous extension of the normalized variances to t = 0 (both 1/2).
inline NormalizedFieldVariances normalized_field_limit(double alpha, double t) {
  if (!(alpha >= 0.0) || !(t >= 0.0)) throw InvalidInput("normalized variances need alpha >= 0 and t >= 0");
  const double y = alpha * alpha * t;
  const double u = -std::expm1(-y);
  return {0.25 * detail::one_minus_exp_over(y) * (2.0 + u), 0.5 + y * y / 6.0};
}

inline NormalizedFieldVariances normalized_field_variances(double alpha, double t) {
  if (!(t > 0.0)) throw InvalidInput("normalized field modes are undefined at t = 0");
  return normalized_field_limit(alpha, t);
}

}  // namespace qsc::gaussian
