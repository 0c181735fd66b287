#pragma once

#include "qsc/ito/differential.hpp"

#include <string>
#include <vector>

namespace qsc {

/// Hudson-Parthasarathy system with identity scattering:
///   dU = {-L* dA + L dA* - (1/2) L*L dt - i H dt} U.
class HPSystem {
 public:
  HPSystem(OpPoly coupling, OpPoly hamiltonian) : L_(std::move(coupling)), H_(std::move(hamiltonian)) {
    if (adjoint(H_) != H_) throw InvalidInput("HPSystem: Hamiltonian is not Hermitian: " + H_.to_string());
  }

  /// The trivial system (L = 0, H = 0).
  static HPSystem trivial() { return {OpPoly{}, OpPoly{}}; }

  const OpPoly& L() const { return L_; }
  const OpPoly& H() const { return H_; }
  OpPoly L_star() const { return adjoint(L_); }

  /// -(1/2) L*L - i H, the dt coefficient of dU U^{-1}.
  OpPoly drift() const { return FormalScalar::rational(-1, 2) * (L_star() * L_) - FormalScalar::i() * H_; }

  /// dU = (generator) U, coefficients acting from the left.
  ItoDifferential propagator_increment() const { return {-L_star(), L_, drift()}; }

  /// dU* = U* (generator), coefficients acting from the right.
  ItoDifferential adjoint_propagator_increment() const { return {L_star(), -L_, adjoint(drift())}; }

  friend bool operator==(const HPSystem& a, const HPSystem& b) { return a.L_ == b.L_ && a.H_ == b.H_; }
  friend bool operator!=(const HPSystem& a, const HPSystem& b) { return !(a == b); }

 private:
  OpPoly L_;
  OpPoly H_;
};

/// (L, H) of the double-pass atom-field system:
///   L = a (p - i x)/sqrt2, H = (1/4) a^2 (p x + x p), a symbolic.
inline HPSystem double_pass_system() {
  const FormalScalar a = FormalScalar::symbol(Symbol::alpha);
  const OpPoly x = OpPoly::x();
  const OpPoly p = OpPoly::p();
  OpPoly L = a * FormalScalar::inv_sqrt2() * (p - FormalScalar::i() * x);
  OpPoly H = FormalScalar::rational(1, 4) * a * a * (p * x + x * p);
  return {L, H};
}

/// First pass (Faraday coupling to p): L = a p/sqrt2, H = 0.
inline HPSystem single_pass_p() {
  const FormalScalar a = FormalScalar::symbol(Symbol::alpha);
  return {a * FormalScalar::inv_sqrt2() * OpPoly::p(), OpPoly{}};
}

/// Second pass (coupling to x through the rotated quadrature): L = -i a x/sqrt2, H = 0.
inline HPSystem single_pass_x() {
  const FormalScalar a = FormalScalar::symbol(Symbol::alpha);
  return {-FormalScalar::i() * a * FormalScalar::inv_sqrt2() * OpPoly::x(), OpPoly{}};
}

/// Factors (U*, Z, U) whose subset expansion is d(U* Z U).
inline std::vector<ProductFactor> flow_factors(const HPSystem& sys, const WeylTerm& z,
                                               const ItoDifferential& dz = {}, bool central = false) {
  return {{"U*", WeylTerm(1), sys.adjoint_propagator_increment(), false},
          {"Z", z, dz, central},
          {"U", WeylTerm(1), sys.propagator_increment(), false}};
}

/// d j_t(Z) for a time-independent system operator Z, obtained from the
/// subset rule on (U*, Z, U). In argument form the result is
///   cA = [L*, Z], cAstar = [Z, L], cT = Lindblad generator of Z.
inline ItoDifferential flow_differential(const HPSystem& sys, const WeylTerm& z) {
  return subset_differential(flow_factors(sys, z)).total;
}

/// Same as flow_differential, plus the subset-by-subset transcript.
inline std::string flow_transcript(const HPSystem& sys, const WeylTerm& z) {
  auto factors = flow_factors(sys, z);
  return transcript(factors, subset_differential(factors));
}

/// -(1/2){L*L, Z} + i[H, Z] + L* Z L, evaluated directly.
inline WeylTerm lindblad(const HPSystem& sys, const WeylTerm& z) {
  const WeylTerm L = sys.L();
  const WeylTerm Ls = sys.L_star();
  const WeylTerm LsL = sys.L_star() * sys.L();
  const WeylTerm H = sys.H();
  return FormalScalar::rational(-1, 2) * anticommutator(LsL, z) + FormalScalar::i() * commutator(H, z) + Ls * z * L;
}

/// Cascade `first` into `second` (the field meets `first` first). The
/// composite increment M2 M1 is expanded with the Ito table and (L, H) are
/// read back off its dA* and dt coefficients:
///   L = L1 + L2,  H = H1 + H2 + (1/2i)(L2* L1 - L1* L2).
inline HPSystem series_product(const HPSystem& first, const HPSystem& second) {
  const std::vector<ProductFactor> factors{{"M2", WeylTerm(1), second.propagator_increment(), false},
                                           {"M1", WeylTerm(1), first.propagator_increment(), false}};
  const ItoDifferential composite = subset_differential(factors).total;
  OpPoly L = composite.cAstar.as_poly();
  if (composite.cA.as_poly() != -adjoint(L)) {
    throw std::logic_error("series_product: dA and dA* coefficients are not -L* and L");
  }
  // cT = -(1/2) L*L - i H  =>  H = i (cT + (1/2) L*L)
  OpPoly H = FormalScalar::i() * (composite.cT.as_poly() + FormalScalar::rational(1, 2) * (adjoint(L) * L));
  return {L, H};
}

}  // namespace qsc
