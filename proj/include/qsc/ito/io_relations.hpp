#pragma once

#include "qsc/ito/hp_system.hpp"

#include <array>
#include <sstream>
#include <string>

namespace qsc {

/// Increment part c_x dX_in + c_p dP_in of a differential, where
/// dX_in = (dA + dA*)/sqrt2 and dP_in = (dA - dA*)/(i sqrt2).
struct InputQuadratureSplit {
  OpPoly x_in;
  OpPoly p_in;
};

inline InputQuadratureSplit split_input_quadratures(const ItoDifferential& d) {
  // cA = (c_x - i c_p)/sqrt2, cA* = (c_x + i c_p)/sqrt2
  const OpPoly cA = d.cA.as_poly();
  const OpPoly cS = d.cAstar.as_poly();
  const FormalScalar s = FormalScalar::inv_sqrt2();
  return {s * (cA + cS), FormalScalar::i() * s * (cA - cS)};
}

/// One input-output relation: dOut = c_x dX_in + c_p dP_in + j_t(drift) dt.
struct IORelation {
  std::string name;       // "x_ph", "p_ph", "x_at", "p_at"
  ItoDifferential differential;
  InputQuadratureSplit input;
  OpPoly drift;           // argument of j_t in the dt coefficient
  std::string transcript; // subset expansion the relation was read from
  std::string algebraic_form;
};

struct IORelations {
  IORelation x_ph;
  IORelation p_ph;
  IORelation x_at;
  IORelation p_at;
  /// Integrated quadratic covariation dX_out dP_out - dP_out dX_out, i.e.
  /// the commutator [x_ph^out, p_ph^out] accumulated over [0, t].
  FormalScalar output_commutator;

  const IORelation& operator[](std::size_t n) const {
    const std::array<const IORelation*, 4> all{&x_ph, &p_ph, &x_at, &p_at};
    return *all.at(n);
  }
};

namespace detail {

// Render the drift j_t(poly) in terms of the out-observables x_at^out, p_at^out.
inline std::string flow_text(const OpPoly& poly) {
  if (poly.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : poly.terms()) {
    std::string obs;
    if (key == OpPoly::Key{1, 0}) {
      obs = "x_at^out(t)";
    } else if (key == OpPoly::Key{0, 1}) {
      obs = "p_at^out(t)";
    } else if (key == OpPoly::Key{0, 0}) {
      obs = "1";
    } else {
      obs = "j_t(x^" + std::to_string(key.first) + "*p^" + std::to_string(key.second) + ")";
    }
    std::string coeff = c.to_string();
    if (c.terms().size() > 1) coeff = "(" + coeff + ")";
    bool negative = false;
    if (coeff.front() == '-') {
      negative = true;
      coeff = coeff.substr(1);
    }
    std::string piece = coeff == "1" ? obs : coeff + "*" + obs;
    if (first) {
      out = negative ? "-" + piece : piece;
      first = false;
    } else {
      out += negative ? " - " + piece : " + " + piece;
    }
  }
  return out;
}

inline std::string input_text(const InputQuadratureSplit& in, const std::string& x_name, const std::string& p_name) {
  std::string out;
  auto add = [&out](const OpPoly& c, const std::string& name) {
    if (c.is_zero()) return;
    std::string coeff = c.is_scalar() ? c.scalar_part().to_string() : "j_t(" + c.to_string() + ")";
    if (c.is_scalar() && c.scalar_part().terms().size() > 1) coeff = "(" + coeff + ")";
    bool negative = coeff.front() == '-';
    if (negative) coeff = coeff.substr(1);
    std::string piece = coeff == "1" ? name : coeff + "*" + name;
    if (out.empty()) {
      out = negative ? "-" + piece : piece;
    } else {
      out += negative ? " - " + piece : " + " + piece;
    }
  };
  add(in.x_in, x_name);
  add(in.p_in, p_name);
  return out.empty() ? "0" : out;
}

inline IORelation field_relation(const HPSystem& sys, const std::string& name, const ItoDifferential& dq,
                                 const FormalScalar& normalization) {
  auto factors = flow_factors(sys, WeylTerm(1), dq, /*central=*/true);
  factors[1].label = "Q";
  const SubsetExpansion expansion = subset_differential(factors);
  if (!expansion.central_part.is_zero()) {
    throw std::logic_error("terms {1},{3},{13} of the output quadrature do not cancel");
  }
  IORelation rel;
  rel.name = name;
  rel.differential = normalization * expansion.total;
  rel.input = split_input_quadratures(rel.differential);
  rel.drift = rel.differential.cT.as_poly();
  rel.transcript = transcript(factors, expansion);
  std::string rhs = input_text(rel.input, "x_ph^in(t)", "p_ph^in(t)");
  const std::string drift = flow_text(rel.drift);
  if (drift != "0") rhs += (drift.front() == '-' ? " - " + drift.substr(1) : " + " + drift);
  rel.algebraic_form = name + "^out(t) = " + rhs;
  return rel;
}

inline IORelation atom_relation(const HPSystem& sys, const std::string& name, const OpPoly& z) {
  IORelation rel;
  rel.name = name;
  rel.differential = flow_differential(sys, z);
  rel.input = split_input_quadratures(rel.differential);
  rel.drift = rel.differential.cT.as_poly();
  rel.transcript = flow_transcript(sys, z);
  std::string rhs = input_text(rel.input, "x_ph^in(t)", "p_ph^in(t)");
  const std::string drift = flow_text(rel.drift);
  if (rhs == "0") {
    rhs = drift;
  } else if (drift != "0") {
    rhs += (drift.front() == '-' ? " - " + drift.substr(1) : " + " + drift);
  }
  rel.algebraic_form = "d" + name + "^out(t)/dt = " + rhs;
  return rel;
}

}  // namespace detail

/// Input-output relations of the field quadratures
///   x_ph^out dt = d[U*(A + A*)U]/sqrt2,  p_ph^out dt = d[U*(A - A*)U]/(i sqrt2)
/// and of the atomic flows j_t(x), j_t(p), all derived from subset expansions.
inline IORelations output_quadrature_relations(const HPSystem& sys) {
  IORelations rels;
  const ItoDifferential d_plus = ItoDifferential::dA() + ItoDifferential::dAstar();
  const ItoDifferential d_minus = ItoDifferential::dA() - ItoDifferential::dAstar();
  rels.x_ph = detail::field_relation(sys, "x_ph", d_plus, FormalScalar::inv_sqrt2());
  rels.p_ph = detail::field_relation(sys, "p_ph", d_minus, -FormalScalar::i() * FormalScalar::inv_sqrt2());
  rels.x_at = detail::atom_relation(sys, "x_at", OpPoly::x());
  rels.p_at = detail::atom_relation(sys, "p_at", OpPoly::p());

  const ItoDifferential rate =
      ito_product(rels.x_ph.differential, rels.p_ph.differential) - ito_product(rels.p_ph.differential,
                                                                                rels.x_ph.differential);
  rels.output_commutator = rate.cT.as_poly().scalar_part() * FormalScalar::symbol(Symbol::t);
  if (!rate.cT.as_poly().is_scalar()) throw std::logic_error("output commutator rate is not a c-number");
  return rels;
}

inline std::string io_relations_text(const IORelations& rels) {
  std::ostringstream os;
  for (std::size_t n = 0; n < 4; ++n) os << rels[n].algebraic_form << "\n";
  os << "[x_ph^out, p_ph^out] = " << rels.output_commutator.to_string() << "\n";
  return os.str();
}

}  // namespace qsc
