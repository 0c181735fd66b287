#pragma once

#include "qsc/algebra/op_poly.hpp"
#include "qsc/errors.hpp"

#include <string>

namespace qsc {

enum class Axis { x, p };

inline const char* axis_name(Axis a) { return a == Axis::x ? "x" : "p"; }

/// exp(i*phase*axis) * postfactor, the canonical form of any product
/// left * exp(i*phase*axis) * right with polynomial left/right factors.
///
/// A zero phase makes the exponential the identity, so plain polynomials are
/// WeylTerms too; for those (and for the zero term) the axis is normalized to
/// x so that equality stays structural.
class WeylTerm {
 public:
  WeylTerm() = default;
  WeylTerm(const OpPoly& poly) : post_(poly) {}  // NOLINT(google-explicit-constructor)
  WeylTerm(long long v) : post_(v) {}            // NOLINT(google-explicit-constructor)
  WeylTerm(Axis axis, FormalScalar phase, OpPoly post = OpPoly::identity())
      : axis_(axis), phase_(std::move(phase)), post_(std::move(post)) {
    canonicalize();
  }

  static WeylTerm exponential(Axis axis, const FormalScalar& phase) { return {axis, phase}; }

  Axis axis() const { return axis_; }
  const FormalScalar& phase() const { return phase_; }
  const OpPoly& postfactor() const { return post_; }

  bool is_zero() const { return post_.is_zero(); }
  bool is_polynomial() const { return phase_.is_zero(); }

  /// Polynomial view; throws if an exponential factor is present.
  const OpPoly& as_poly() const {
    if (!is_polynomial()) throw UnsupportedFragment("WeylTerm carries an exponential factor: " + to_string());
    return post_;
  }

  WeylTerm operator-() const { return {axis_, phase_, -post_}; }

  WeylTerm& operator+=(const WeylTerm& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (!same_exponential(o)) {
      throw UnsupportedFragment("cannot add terms with different exponential factors: " + to_string() + " and " +
                                o.to_string());
    }
    post_ += o.post_;
    canonicalize();
    return *this;
  }
  WeylTerm& operator-=(const WeylTerm& o) { return *this += -o; }
  friend WeylTerm operator+(WeylTerm a, const WeylTerm& b) { return a += b; }
  friend WeylTerm operator-(WeylTerm a, const WeylTerm& b) { return a -= b; }

  friend WeylTerm operator*(const FormalScalar& s, const WeylTerm& a) { return {a.axis_, a.phase_, s * a.post_}; }
  friend WeylTerm operator*(const WeylTerm& a, const FormalScalar& s) { return s * a; }

  /// e^{i a axis} A * e^{i b axis} B = e^{i (a+b) axis} A' B, where A' is A
  /// conjugated past the second exponential.
  friend WeylTerm operator*(const WeylTerm& a, const WeylTerm& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (b.is_polynomial()) return {a.axis_, a.phase_, a.post_ * b.post_};
    if (!a.is_polynomial() && a.axis_ != b.axis_) {
      throw UnsupportedFragment("mixed-axis Weyl product: " + a.to_string() + " * " + b.to_string());
    }
    const OpPoly moved = move_left_through(a.post_, b.axis_, b.phase_);
    return {b.axis_, a.phase_ + b.phase_, moved * b.post_};
  }

  friend bool operator==(const WeylTerm& a, const WeylTerm& b) {
    return a.axis_ == b.axis_ && a.phase_ == b.phase_ && a.post_ == b.post_;
  }
  friend bool operator!=(const WeylTerm& a, const WeylTerm& b) { return !(a == b); }

  bool same_exponential(const WeylTerm& o) const { return axis_ == o.axis_ && phase_ == o.phase_; }

  /// "exp(i*l*p)*(x^1*p^0 - l*x^0*p^0)"; polynomials print as OpPoly.
  std::string to_string() const {
    if (is_polynomial()) return post_.to_string();
    std::string phase = phase_.to_string();
    if (phase_.terms().size() > 1) phase = "(" + phase + ")";
    return "exp(i*" + phase + "*" + axis_name(axis_) + ")*(" + post_.to_string() + ")";
  }

  /// A * e^{i lambda axis} = e^{i lambda axis} * A', using
  /// x e^{i l p} = e^{i l p} (x - l) and p e^{i l x} = e^{i l x} (p + l).
  static OpPoly move_left_through(const OpPoly& poly, Axis axis, const FormalScalar& lambda) {
    if (axis == Axis::p) return poly.shifted(true, -lambda);
    return poly.shifted(false, lambda);
  }

 private:
  void canonicalize() {
    if (post_.is_zero() || phase_.is_zero()) {
      axis_ = Axis::x;
      if (post_.is_zero()) phase_ = FormalScalar{};
    }
  }

  Axis axis_ = Axis::x;
  FormalScalar phase_;
  OpPoly post_;
};

/// (e^{i lambda axis} B)^* = B^* e^{-i lambda^* axis}, renormalized.
inline WeylTerm adjoint(const WeylTerm& a) {
  const OpPoly b_star = adjoint(a.postfactor());
  if (a.is_polynomial()) return b_star;
  const FormalScalar mu = -a.phase().conj();
  return {a.axis(), mu, WeylTerm::move_left_through(b_star, a.axis(), mu)};
}

inline WeylTerm mul(const WeylTerm& a, const WeylTerm& b) { return a * b; }

inline WeylTerm commutator(const WeylTerm& a, const WeylTerm& b) { return a * b - b * a; }

inline WeylTerm anticommutator(const WeylTerm& a, const WeylTerm& b) { return a * b + b * a; }

/// Canonical form of left * term * right (identity prefactor).
inline WeylTerm weyl_normalize(const OpPoly& left, const WeylTerm& term, const OpPoly& right) {
  return WeylTerm(left) * term * WeylTerm(right);
}

}  // namespace qsc
