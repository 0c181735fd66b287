#pragma once

#include "qsc/errors.hpp"
#include "qsc/gaussian/squeezing.hpp"
#include "qsc/ito/char_fn_generator.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace qsc::pde {

using qsc::CharFamily;

/// FormalScalar flattened to double coefficients for repeated evaluation.
class CompiledScalar {
 public:
  CompiledScalar() = default;
  explicit CompiledScalar(const FormalScalar& s) {
    for (const auto& [e, c] : s.terms()) terms_.push_back({c.to_complex(), e});
  }

  std::complex<double> operator()(double alpha, double k, double l, double t = 0.0) const {
    const std::array<double, kSymbolCount> v{alpha, k, l, t};
    std::complex<double> sum{0.0, 0.0};
    for (const auto& term : terms_) {
      std::complex<double> x = term.coeff;
      for (std::size_t n = 0; n < kSymbolCount; ++n) {
        for (int p = 0; p < term.exponents[n]; ++p) x *= v[n];
      }
      sum += x;
    }
    return sum;
  }

 private:
  struct Term {
    std::complex<double> coeff;
    FormalScalar::Exponents exponents;
  };
  std::vector<Term> terms_;
};

/// Numeric form of dF/dt = c0(k, l) F + c1(k, l) dF/dl at fixed alpha, with
/// the coefficients taken from the symbolic generator.
class CharPde {
 public:
  CharPde(CharFamily family, double alpha) : family_(family), alpha_(alpha) {
    const PdeCoefficients coeffs = char_fn_generator(double_pass_system(), family);
    if (coeffs.c0.degree_in({Symbol::l}) > 2 || coeffs.c1.degree_in({Symbol::l}) > 1) {
      throw UnsupportedFragment("characteristic-function PDE outside the quadratic-decay/affine-drift fragment");
    }
    c0_ = CompiledScalar(coeffs.c0);
    c1_ = CompiledScalar(coeffs.c1);
  }

  CharFamily family() const { return family_; }
  double alpha() const { return alpha_; }

  double c0(double k, double l) const { return real_part(c0_(alpha_, k, l)); }
  double c1(double k, double l) const { return real_part(c1_(alpha_, k, l)); }

  /// c1 = slope * l + intercept for fixed k.
  std::pair<double, double> c1_affine(double k) const {
    const double intercept = c1(k, 0.0);
    return {c1(k, 1.0) - intercept, intercept};
  }

 private:
  static double real_part(std::complex<double> z) {
    if (std::abs(z.imag()) > 1e-12 * (1.0 + std::abs(z.real()))) throw std::logic_error("PDE coefficient is complex");
    return z.real();
  }

  CharFamily family_;
  double alpha_;
  CompiledScalar c0_;
  CompiledScalar c1_;
};

/// Vacuum / ground-state initial condition shared by F and G.
inline double initial_char(double l) { return std::exp(-0.25 * l * l); }

/// Gaussian closed form exp(-(1/2)[s_aa l^2 + 2 s_af k l + s_ff k^2]) with the
/// published (co)variances of the family.
inline double closed_form_char(CharFamily family, double alpha, double t, double k, double l) {
  const gaussian::CovSnapshot s = gaussian::closed_form_covariances(alpha, t);
  double s_aa = 0;
  double s_af = 0;
  double s_ff = 0;
  if (family == CharFamily::F) {
    s_aa = s.var_p_at();
    s_af = s.cov_pat_xph();
    s_ff = s.var_x_ph();
  } else {
    s_aa = s.var_x_at();
    s_af = s.cov_xat_pph();
    s_ff = s.var_p_ph();
  }
  return std::exp(-0.5 * (s_aa * l * l + 2.0 * s_af * k * l + s_ff * k * k));
}

namespace detail {

// expm1(z)/z with the z -> 0 limit.
inline double expm1_over(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

}  // namespace detail

/// Method of characteristics. Along dl/ds = -c1(l) the PDE reduces to
/// dF/ds = c0 F; the characteristic through (t, l) is traced back to s = 0
/// (for F the forward drift is expanding, so backward tracing contracts) and
/// the decay exponent is accumulated by adaptive Gauss-Kronrod quadrature.
inline double moc_solve(const CharPde& pde, double t, double k, double l, double tolerance = 1e-12) {
  if (!(t >= 0.0)) throw InvalidInput("moc_solve needs t >= 0");
  const auto [beta, gamma] = pde.c1_affine(k);
  // tau = t - s runs backwards from the query point: dl/dtau = beta l + gamma.
  auto foot = [&, beta = beta, gamma = gamma](double tau) {
    return l + (beta * l + gamma) * tau * detail::expm1_over(beta * tau);
  };
  if (t == 0.0) return initial_char(l);
  auto integrand = [&](double tau) { return pde.c0(k, foot(tau)); };
  double error = 0.0;
  const double exponent =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, t, 20, tolerance, &error);
  const double scale = std::max(1.0, std::abs(exponent));
  if (!(error <= 100.0 * tolerance * scale)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "moc_solve: quadrature did not converge on [0, %.17g] (k=%.17g, l=%.17g, err=%.3g)",
                  t, k, l, error);
    throw NumericalError(buf);
  }
  return initial_char(foot(t)) * std::exp(exponent);
}

inline double moc_solve(CharFamily family, double alpha, double t, double k, double l) {
  return moc_solve(CharPde(family, alpha), t, k, l);
}

/// Uniform (k, l) grid; both axes include their end points.
struct GridSpec {
  double k_min = -8.0;
  double k_max = 8.0;
  double dk = 0.02;
  double l_min = -8.0;
  double l_max = 8.0;
  double dl = 0.02;

  std::size_t k_count() const { return count(k_min, k_max, dk); }
  std::size_t l_count() const { return count(l_min, l_max, dl); }
  double k_at(std::size_t i) const { return k_min + static_cast<double>(i) * dk; }
  double l_at(std::size_t j) const { return l_min + static_cast<double>(j) * dl; }

  void validate() const {
    if (!(dk > 0.0) || !(dl > 0.0) || !(k_max >= k_min) || !(l_max > l_min)) throw ConfigError("invalid PDE grid");
    auto aligned = [](double lo, double hi, double h) {
      const double n = (hi - lo) / h;
      return std::abs(n - std::round(n)) < 1e-9 * std::max(1.0, n);
    };
    if (!aligned(k_min, k_max, dk) || !aligned(l_min, l_max, dl)) {
      throw ConfigError("PDE grid extents must be integer multiples of the step");
    }
  }

 private:
  static std::size_t count(double lo, double hi, double h) {
    return static_cast<std::size_t>(std::llround((hi - lo) / h)) + 1;
  }
};

/// Sampled characteristic function; values stored k-major.
struct CharSurface {
  CharFamily family = CharFamily::F;
  double alpha = 0.0;
  double t = 0.0;
  GridSpec grid;
  std::vector<double> values;

  double at(std::size_t ik, std::size_t il) const { return values[ik * grid.l_count() + il]; }
  double& at(std::size_t ik, std::size_t il) { return values[ik * grid.l_count() + il]; }
};

/// Largest admissible Courant number |drift| dt / dl of the upwind-RK3 scheme.
inline constexpr double kMaxCourant = 0.6;

/// Values next to an inflow boundary above this are reported as leakage: the
/// zero Dirichlet data read there is then a poor stand-in for the solution.
/// Outflow boundaries are not monitored since the upwind stencil never reads
/// their ghost values (F keeps tails ~e^{-8} in l there once p squeezes).
inline constexpr double kLeakageThreshold = 1e-6;

inline double max_drift(const CharPde& pde, const GridSpec& grid) {
  double vmax = 0.0;
  for (std::size_t ik = 0; ik < grid.k_count(); ++ik) {
    const double k = grid.k_at(ik);
    vmax = std::max({vmax, std::abs(pde.c1(k, grid.l_min)), std::abs(pde.c1(k, grid.l_max))});
  }
  return vmax;
}

/// Time step at half the admissible Courant number.
inline double default_time_step(const CharPde& pde, const GridSpec& grid) {
  const double vmax = max_drift(pde, grid);
  return vmax == 0.0 ? grid.dl : 0.5 * kMaxCourant * grid.dl / vmax;
}

/// Explicit solve, one independent 1-D problem per k:
/// Strang splitting of the exact pointwise decay exp(c0 dt/2) around an
/// SSP-RK3 step of second-order upwind advection F_t + v F_l = 0 with
/// v = -c1, zero Dirichlet data outside the l range. dt <= 0 selects
/// default_time_step.
inline CharSurface fd_solve(const CharPde& pde, const GridSpec& grid, double t, double dt = 0.0) {
  grid.validate();
  if (!(t >= 0.0)) throw InvalidInput("fd_solve needs t >= 0");
  if (dt <= 0.0) dt = default_time_step(pde, grid);
  const double vmax = max_drift(pde, grid);
  if (vmax * dt > kMaxCourant * grid.dl * (1.0 + 1e-12)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "fd_solve: CFL violated (|drift| dt / dl = %.4g > %.2g)", vmax * dt / grid.dl,
                  kMaxCourant);
    throw ConfigError(buf);
  }
  const std::size_t steps = t == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
  const double h = steps == 0 ? 0.0 : t / static_cast<double>(steps);

  CharSurface surface{pde.family(), pde.alpha(), t, grid, {}};
  const std::size_t nk = grid.k_count();
  const std::size_t nl = grid.l_count();
  surface.values.resize(nk * nl);

  std::vector<double> f(nl);
  std::vector<double> f1(nl);
  std::vector<double> f2(nl);
  std::vector<double> rate(nl);
  std::vector<double> velocity(nl);
  std::vector<double> half_decay(nl);
  const double inv_2dl = 1.0 / (2.0 * grid.dl);

  auto advect = [&](const std::vector<double>& u, std::vector<double>& out) {
    auto val = [&u, nl](std::ptrdiff_t j) { return (j < 0 || j >= static_cast<std::ptrdiff_t>(nl)) ? 0.0 : u[j]; };
    for (std::size_t j = 0; j < nl; ++j) {
      const double v = velocity[j];
      const auto i = static_cast<std::ptrdiff_t>(j);
      double slope = 0.0;
      if (v > 0.0) {
        slope = (3.0 * u[j] - 4.0 * val(i - 1) + val(i - 2)) * inv_2dl;
      } else if (v < 0.0) {
        slope = (-3.0 * u[j] + 4.0 * val(i + 1) - val(i + 2)) * inv_2dl;
      }
      out[j] = -v * slope;
    }
  };

  double leakage = 0.0;
  for (std::size_t ik = 0; ik < nk; ++ik) {
    const double k = grid.k_at(ik);
    for (std::size_t j = 0; j < nl; ++j) {
      const double l = grid.l_at(j);
      f[j] = initial_char(l);
      velocity[j] = -pde.c1(k, l);
      half_decay[j] = std::exp(0.5 * h * pde.c0(k, l));
    }
    const bool inflow_left = velocity[0] > 0.0;
    const bool inflow_right = velocity[nl - 1] < 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
      for (std::size_t j = 0; j < nl; ++j) f[j] *= half_decay[j];
      advect(f, rate);
      for (std::size_t j = 0; j < nl; ++j) f1[j] = f[j] + h * rate[j];
      advect(f1, rate);
      for (std::size_t j = 0; j < nl; ++j) f2[j] = 0.75 * f[j] + 0.25 * (f1[j] + h * rate[j]);
      advect(f2, rate);
      for (std::size_t j = 0; j < nl; ++j) f[j] = (f[j] + 2.0 * (f2[j] + h * rate[j])) / 3.0;
      for (std::size_t j = 0; j < nl; ++j) f[j] *= half_decay[j];
      if (inflow_left) leakage = std::max({leakage, std::abs(f[0]), std::abs(f[1])});
      if (inflow_right) leakage = std::max({leakage, std::abs(f[nl - 2]), std::abs(f[nl - 1])});
    }
    std::copy(f.begin(), f.end(), surface.values.begin() + static_cast<std::ptrdiff_t>(ik * nl));
  }
  if (leakage > kLeakageThreshold) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "fd_solve: inflow boundary value %.3g exceeds leakage threshold %.1g", leakage,
                  kLeakageThreshold);
    throw NumericalError(buf);
  }
  return surface;
}

inline CharSurface fd_solve(CharFamily family, double alpha, const GridSpec& grid, double t, double dt = 0.0) {
  return fd_solve(CharPde(family, alpha), grid, t, dt);
}

/// Largest |surface - closed form| over the grid.
inline double max_error_vs_closed_form(const CharSurface& s) {
  double worst = 0.0;
  for (std::size_t ik = 0; ik < s.grid.k_count(); ++ik) {
    for (std::size_t il = 0; il < s.grid.l_count(); ++il) {
      const double exact = closed_form_char(s.family, s.alpha, s.t, s.grid.k_at(ik), s.grid.l_at(il));
      worst = std::max(worst, std::abs(s.at(ik, il) - exact));
    }
  }
  return worst;
}

using Sampler = std::function<double(double t, double k, double l)>;

/// dF/dt - c0 F - c1 dF/dl by central differences of step h.
inline double pde_residual(const CharPde& pde, const Sampler& sampler, double t, double k, double l,
                           double h = 1e-4) {
  const double f = sampler(t, k, l);
  const double dfdt = (sampler(t + h, k, l) - sampler(t - h, k, l)) / (2.0 * h);
  const double dfdl = (sampler(t, k, l + h) - sampler(t, k, l - h)) / (2.0 * h);
  return dfdt - pde.c0(k, l) * f - pde.c1(k, l) * dfdl;
}

/// Result of an fd_solve refinement study at dl, dl/2, dl/4, ...
struct ConvergenceStudy {
  std::vector<double> dl;
  std::vector<double> max_error;
  std::vector<double> observed_order;  // log2(e_n / e_{n+1})
};

/// Refinement in dl with the time step tied to dl (fixed Courant number).
inline ConvergenceStudy fd_convergence(const CharPde& pde, GridSpec grid, double t, std::size_t levels) {
  ConvergenceStudy study;
  for (std::size_t n = 0; n < levels; ++n) {
    const CharSurface s = fd_solve(pde, grid, t);
    study.dl.push_back(grid.dl);
    study.max_error.push_back(max_error_vs_closed_form(s));
    grid.dl *= 0.5;
  }
  for (std::size_t n = 0; n + 1 < study.max_error.size(); ++n) {
    study.observed_order.push_back(std::log2(study.max_error[n] / study.max_error[n + 1]));
  }
  return study;
}

/// "# family=F alpha=1 t=0.5 k_min=... " then "k,l,value" rows; every
/// `stride`-th grid point along each axis.
inline void write_surface_csv(std::ostream& os, const CharSurface& s, std::size_t stride = 1) {
  if (stride == 0) stride = 1;
  const auto& g = s.grid;
  os << "# family=" << family_name(s.family) << " alpha=" << gaussian::format_value(s.alpha)
     << " t=" << gaussian::format_value(s.t) << " k_min=" << gaussian::format_value(g.k_min)
     << " k_max=" << gaussian::format_value(g.k_max) << " dk=" << gaussian::format_value(g.dk)
     << " l_min=" << gaussian::format_value(g.l_min) << " l_max=" << gaussian::format_value(g.l_max)
     << " dl=" << gaussian::format_value(g.dl) << " stride=" << stride << "\n";
  os << "k,l,value\n";
  for (std::size_t ik = 0; ik < g.k_count(); ik += stride) {
    for (std::size_t il = 0; il < g.l_count(); il += stride) {
      os << gaussian::format_value(g.k_at(ik)) << "," << gaussian::format_value(g.l_at(il)) << ","
         << gaussian::format_value(s.at(ik, il)) << "\n";
    }
  }
}

}  // namespace qsc::pde
