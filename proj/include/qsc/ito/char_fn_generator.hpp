#pragma once

#include "qsc/ito/hp_system.hpp"

#include <string>

namespace qsc {

/// F pairs the atomic p with the field x quadrature, G pairs the atomic x
/// with the field p quadrature.
enum class CharFamily { F, G };

inline const char* family_name(CharFamily f) { return f == CharFamily::F ? "F" : "G"; }

/// dF/dt = c0(k, l) F + c1(k, l) dF/dl.
struct PdeCoefficients {
  CharFamily family;
  FormalScalar c0;
  FormalScalar c1;
};

/// Field Weyl exponential W_t = exp(i k Q_t) with dQ = a dA + b dA*.
/// Installed as a primitive: dW = (i k a dA + i k b dA* - (1/2) k^2 a b dt) W.
inline ItoDifferential field_exponential_increment(const FormalScalar& a, const FormalScalar& b) {
  const FormalScalar k = FormalScalar::symbol(Symbol::k);
  const FormalScalar ik = FormalScalar::i() * k;
  return {WeylTerm(OpPoly(ik * a)), WeylTerm(OpPoly(ik * b)), WeylTerm(OpPoly(FormalScalar::rational(-1, 2) * k * k * a * b))};
}

/// The atomic Weyl factor exp(i l axis) and the matching field quadrature
/// increment (a, b) for each family.
struct CharFamilyData {
  WeylTerm atomic;
  FormalScalar field_a;
  FormalScalar field_b;
};

inline CharFamilyData char_family_data(CharFamily family) {
  const FormalScalar l = FormalScalar::symbol(Symbol::l);
  const FormalScalar s = FormalScalar::inv_sqrt2();
  if (family == CharFamily::F) {
    // x_ph: dQ = (dA + dA*)/sqrt2
    return {WeylTerm::exponential(Axis::p, l), s, s};
  }
  // p_ph: dQ = (dA - dA*)/(i sqrt2)
  return {WeylTerm::exponential(Axis::x, l), -FormalScalar::i() * s, FormalScalar::i() * s};
}

/// Subset factors (U*, e^{il axis} (x) W_t, U); the common field exponential
/// W_t is factored out of every term.
inline std::vector<ProductFactor> char_fn_factors(const HPSystem& sys, CharFamily family) {
  const CharFamilyData data = char_family_data(family);
  const ItoDifferential dw = field_exponential_increment(data.field_a, data.field_b);
  const ItoDifferential dz{data.atomic * dw.cA, data.atomic * dw.cAstar, data.atomic * dw.cT};
  auto factors = flow_factors(sys, data.atomic, dz);
  factors[1].label = family == CharFamily::F ? "exp(i*l*p)W" : "exp(i*l*x)W";
  return factors;
}

/// Generator of the characteristic-function PDE, derived by expanding
/// d<U*(e^{il axis} (x) W_t)U> with the subset rule and reducing
/// <e^{il axis} axis> = -i d/dl <e^{il axis}>.
inline PdeCoefficients char_fn_generator(const HPSystem& sys, CharFamily family) {
  if (sys.L().degree() > 1 || sys.H().degree() > 2) {
    throw UnsupportedFragment("char_fn_generator needs linear L and quadratic H");
  }
  const auto factors = char_fn_factors(sys, family);
  const WeylTerm drift = vacuum_expectation(subset_differential(factors).total);
  const Axis axis = family == CharFamily::F ? Axis::p : Axis::x;
  if (!drift.is_polynomial() && drift.axis() != axis) throw std::logic_error("char_fn_generator: axis changed");
  const FormalScalar l = FormalScalar::symbol(Symbol::l);
  if (!drift.is_zero() && drift.phase() != l) throw std::logic_error("char_fn_generator: phase changed");

  PdeCoefficients out{family, {}, {}};
  for (const auto& [key, c] : drift.postfactor().terms()) {
    const OpPoly::Key derivative_key = axis == Axis::p ? OpPoly::Key{0, 1} : OpPoly::Key{1, 0};
    if (key == OpPoly::Key{0, 0}) {
      out.c0 += c;
    } else if (key == derivative_key) {
      out.c1 += -FormalScalar::i() * c;
    } else {
      throw UnsupportedFragment("generator leaves a term outside {1, axis}: " + drift.to_string());
    }
  }
  return out;
}

inline std::string char_fn_transcript(const HPSystem& sys, CharFamily family) {
  const auto factors = char_fn_factors(sys, family);
  return transcript(factors, subset_differential(factors));
}

}  // namespace qsc
