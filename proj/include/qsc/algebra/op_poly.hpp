#pragma once

#include "qsc/algebra/formal_scalar.hpp"

#include <map>
#include <string>
#include <utility>

namespace qsc {

/// Noncommutative polynomial in the canonical pair (x, p), [x, p] = i.
///
/// Every monomial is kept normal ordered as x^m p^n; the key (m, n) maps to a
/// FormalScalar coefficient and zero coefficients are never stored.
class OpPoly {
 public:
  using Key = std::pair<int, int>;
  using TermMap = std::map<Key, FormalScalar>;

  OpPoly() = default;
  OpPoly(const FormalScalar& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.emplace(Key{0, 0}, c);
  }
  OpPoly(long long v) : OpPoly(FormalScalar(v)) {}  // NOLINT(google-explicit-constructor)

  static OpPoly identity() { return OpPoly(1); }
  static OpPoly x() { return monomial(1, 0); }
  static OpPoly p() { return monomial(0, 1); }
  static OpPoly monomial(int m, int n, const FormalScalar& c = FormalScalar(1)) {
    OpPoly out;
    out.add_term({m, n}, c);
    return out;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  FormalScalar coefficient(int m, int n) const {
    auto it = terms_.find({m, n});
    return it == terms_.end() ? FormalScalar{} : it->second;
  }

  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
    return d;
  }

  /// True for a scalar multiple of the identity (including zero).
  bool is_scalar() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0}); }
  FormalScalar scalar_part() const { return coefficient(0, 0); }

  OpPoly operator-() const {
    OpPoly out;
    for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
    return out;
  }

  OpPoly& operator+=(const OpPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  OpPoly& operator-=(const OpPoly& o) { return *this += -o; }
  friend OpPoly operator+(OpPoly a, const OpPoly& b) { return a += b; }
  friend OpPoly operator-(OpPoly a, const OpPoly& b) { return a -= b; }

  friend OpPoly operator*(const FormalScalar& s, const OpPoly& a) {
    OpPoly out;
    for (const auto& [k, c] : a.terms_) out.add_term(k, s * c);
    return out;
  }
  friend OpPoly operator*(const OpPoly& a, const FormalScalar& s) { return s * a; }

  /// Normal-ordered operator product.
  friend OpPoly operator*(const OpPoly& a, const OpPoly& b) {
    OpPoly out;
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        const FormalScalar c = ca * cb;
        // x^a1 (p^a2 x^b1) p^b2, with
        // p^n x^m = sum_j j! C(n,j) C(m,j) (-i)^j x^(m-j) p^(n-j).
        const int n = ka.second;
        const int m = kb.first;
        Rational weight = 1;
        ComplexSurd phase = 1;
        for (int j = 0; j <= std::min(n, m); ++j) {
          if (j > 0) {
            weight = weight * Rational((n - j + 1) * (m - j + 1), j);
            phase = phase * (-ComplexSurd::i());
          }
          out.add_term({ka.first + m - j, n - j + kb.second}, FormalScalar(ComplexSurd::rational(weight) * phase) * c);
        }
      }
    }
    return out;
  }
  OpPoly& operator*=(const OpPoly& o) { return *this = *this * o; }

  friend bool operator==(const OpPoly& a, const OpPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const OpPoly& a, const OpPoly& b) { return !(a == b); }

  /// Replace x by (x + shift) or p by (p + shift). Normal order is preserved
  /// because the shift is a scalar.
  OpPoly shifted(bool shift_x, const FormalScalar& shift) const {
    OpPoly out;
    for (const auto& [k, c] : terms_) {
      const int power = shift_x ? k.first : k.second;
      // (v + s)^power = sum_j C(power, j) v^j s^(power-j)
      Rational binom = 1;
      for (int j = power; j >= 0; --j) {
        const FormalScalar coeff = FormalScalar::rational(binom) * shift.pow(power - j) * c;
        if (shift_x) {
          out.add_term({j, k.second}, coeff);
        } else {
          out.add_term({k.first, j}, coeff);
        }
        if (j > 0) binom = binom * Rational(j, power - j + 1);
      }
    }
    return out;
  }

  /// "(1/2)*a^2*x^2*p^0 - i*x^0*p^1"; the identity monomial is written x^0*p^0.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      const std::string ops = "x^" + std::to_string(k.first) + "*p^" + std::to_string(k.second);
      std::string coeff = c.to_string();
      bool negative = false;
      if (c.terms().size() > 1) {
        coeff = "(" + coeff + ")";
      } else if (coeff.front() == '-') {
        negative = true;
        coeff = coeff.substr(1);
      }
      const std::string piece = (coeff == "1" ? ops : coeff + "*" + ops);
      if (first) {
        out = negative ? "-" + piece : piece;
        first = false;
      } else {
        out += negative ? " - " + piece : " + " + piece;
      }
    }
    return out;
  }

 private:
  void add_term(const Key& k, const FormalScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  TermMap terms_;
};

/// Hermitian adjoint: conjugate coefficients, reverse each monomial to
/// p^n x^m and normal order again.
inline OpPoly adjoint(const OpPoly& a) {
  OpPoly out;
  for (const auto& [k, c] : a.terms()) {
    out += OpPoly::monomial(0, k.second, c.conj()) * OpPoly::monomial(k.first, 0);
  }
  return out;
}

inline OpPoly mul(const OpPoly& a, const OpPoly& b) { return a * b; }

inline OpPoly commutator(const OpPoly& a, const OpPoly& b) { return a * b - b * a; }

inline OpPoly anticommutator(const OpPoly& a, const OpPoly& b) { return a * b + b * a; }

}  // namespace qsc
