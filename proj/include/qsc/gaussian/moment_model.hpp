#pragma once

#include "qsc/ito/io_relations.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>

namespace qsc::gaussian {

/// Fixed mode order (x_at, p_at, X_ph, P_ph); X_ph and P_ph are the
/// accumulated output quadratures with [X_ph, P_ph] = i t.
struct ModeBasis {
  static constexpr std::size_t size = 4;
  static constexpr std::size_t x_at = 0;
  static constexpr std::size_t p_at = 1;
  static constexpr std::size_t x_ph = 2;
  static constexpr std::size_t p_ph = 3;
  static constexpr std::array<const char*, size> labels{"x_at", "p_at", "X_ph", "P_ph"};
};

using SymbolicMatrix = std::array<std::array<FormalScalar, ModeBasis::size>, ModeBasis::size>;

/// d mean = A mean dt + noise, d Cov/dt = A Cov + Cov A^T + D, with alpha
/// still symbolic.
struct SymbolicMomentModel {
  SymbolicMatrix drift;
  SymbolicMatrix diffusion;
};

namespace detail {

inline FormalScalar require_scalar(const OpPoly& p, const char* what) {
  if (!p.is_scalar()) throw UnsupportedFragment(std::string(what) + " is not a c-number: " + p.to_string());
  return p.scalar_part();
}

// Coefficients of a quadratic Z in the symmetric basis {x^2, (xp+px)/2, p^2}
// plus the c-number remainder; xp = (xp+px)/2 + i/2.
struct SymmetricQuadratic {
  FormalScalar xx, xp, pp, constant;
};

inline SymmetricQuadratic symmetric_quadratic(const OpPoly& z) {
  SymmetricQuadratic out;
  for (const auto& [key, c] : z.terms()) {
    if (key == OpPoly::Key{2, 0}) {
      out.xx += c;
    } else if (key == OpPoly::Key{1, 1}) {
      out.xp += c;
      out.constant += FormalScalar::rational(1, 2) * FormalScalar::i() * c;
    } else if (key == OpPoly::Key{0, 2}) {
      out.pp += c;
    } else if (key == OpPoly::Key{0, 0}) {
      out.constant += c;
    } else {
      throw UnsupportedFragment("moment equation leaves a non-quadratic term: " + z.to_string());
    }
  }
  return out;
}

}  // namespace detail

/// Moment equations of the four modes.
///
/// Drift rows and field diffusion come from the input-output relations (dt
/// coefficients and symmetrized Ito products of the increments). The atomic
/// diffusion block comes from the Lindblad generator of x^2, (xp+px)/2, p^2,
/// whose quadratic part is checked against the drift.
inline SymbolicMomentModel derive_moment_model(const HPSystem& sys) {
  const IORelations rels = output_quadrature_relations(sys);
  const std::array<const IORelation*, ModeBasis::size> rows{&rels.x_at, &rels.p_at, &rels.x_ph, &rels.p_ph};

  SymbolicMomentModel model;
  std::array<FormalScalar, ModeBasis::size> inc_a;
  std::array<FormalScalar, ModeBasis::size> inc_astar;
  for (std::size_t i = 0; i < ModeBasis::size; ++i) {
    const IORelation& rel = *rows[i];
    for (const auto& [key, c] : rel.drift.terms()) {
      if (key == OpPoly::Key{1, 0}) {
        model.drift[i][ModeBasis::x_at] = c;
      } else if (key == OpPoly::Key{0, 1}) {
        model.drift[i][ModeBasis::p_at] = c;
      } else {
        throw UnsupportedFragment("drift of " + rel.name + " is not linear: " + rel.drift.to_string());
      }
    }
    inc_a[i] = detail::require_scalar(rel.differential.cA.as_poly(), "dA coefficient");
    inc_astar[i] = detail::require_scalar(rel.differential.cAstar.as_poly(), "dA* coefficient");
  }
  for (std::size_t i = 0; i < ModeBasis::size; ++i) {
    for (std::size_t j = 0; j < ModeBasis::size; ++j) {
      // (1/2)(dz_i dz_j + dz_j dz_i) / dt
      model.diffusion[i][j] = FormalScalar::rational(1, 2) * (inc_a[i] * inc_astar[j] + inc_a[j] * inc_astar[i]);
    }
  }

  // Atomic block from the generator of the quadratic monomials.
  const OpPoly x = OpPoly::x();
  const OpPoly p = OpPoly::p();
  const std::array<std::pair<std::size_t, std::size_t>, 3> pairs{{{0, 0}, {0, 1}, {1, 1}}};
  const std::array<OpPoly, 3> monomials{x * x, FormalScalar::rational(1, 2) * (x * p + p * x), p * p};
  const auto& A = model.drift;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const auto [i, j] = pairs[n];
    const auto quad = detail::symmetric_quadratic(flow_differential(sys, monomials[n]).cT.as_poly());
    // Expected: sum_k A_ik M_kj + A_jk M_ik, expressed on M_xx, M_xp, M_pp.
    std::array<FormalScalar, 3> expected;  // xx, xp, pp
    auto add = [&expected](std::size_t a, std::size_t b, const FormalScalar& c) {
      const std::size_t lo = std::min(a, b);
      const std::size_t hi = std::max(a, b);
      expected[lo + hi] += c;  // (0,0)->0, (0,1)->1, (1,1)->2
    };
    for (std::size_t k = 0; k < 2; ++k) {
      add(k, j, A[i][k]);
      add(i, k, A[j][k]);
    }
    if (quad.xx != expected[0] || quad.xp != expected[1] || quad.pp != expected[2]) {
      throw std::logic_error("generator of the atomic second moments disagrees with the drift");
    }
    if (quad.constant != model.diffusion[i][j]) {
      throw std::logic_error("atomic diffusion from the generator disagrees with the Ito products");
    }
    model.diffusion[i][j] = quad.constant;
    model.diffusion[j][i] = quad.constant;
  }
  return model;
}

/// Model for the double-pass system, derived once.
inline const SymbolicMomentModel& double_pass_moment_model() {
  static const SymbolicMomentModel model = derive_moment_model(double_pass_system());
  return model;
}

inline Eigen::Matrix4d instantiate(const SymbolicMatrix& m, double alpha) {
  Eigen::Matrix4d out;
  for (std::size_t i = 0; i < ModeBasis::size; ++i) {
    for (std::size_t j = 0; j < ModeBasis::size; ++j) {
      const auto v = m[i][j].evaluate({alpha, 0.0, 0.0, 0.0});
      if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real()))) {
        throw std::logic_error("moment model entry is not real");
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.real();
    }
  }
  return out;
}

}  // namespace qsc::gaussian
