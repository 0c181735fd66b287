#pragma once

#include "qsc/algebra/complex_surd.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>

namespace qsc {

/// Formal real parameters that may appear in coefficients.
enum class Symbol : std::size_t { alpha = 0, k = 1, l = 2, t = 3 };

inline constexpr std::size_t kSymbolCount = 4;

inline const char* symbol_name(Symbol s) {
  static constexpr std::array<const char*, kSymbolCount> names{"a", "k", "l", "t"};
  return names[static_cast<std::size_t>(s)];
}

/// Exact polynomial in the formal symbols with coefficients in Q(i, sqrt2).
///
/// Stored canonically: a map ordered by exponent tuple with no zero entries,
/// so equality is structural.
class FormalScalar {
 public:
  using Exponents = std::array<int, kSymbolCount>;
  using TermMap = std::map<Exponents, ComplexSurd>;

  FormalScalar() = default;
  FormalScalar(long long v) : FormalScalar(ComplexSurd(v)) {}  // NOLINT(google-explicit-constructor)
  FormalScalar(const ComplexSurd& c) {                          // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.emplace(Exponents{}, c);
  }

  static FormalScalar symbol(Symbol s, int power = 1) {
    FormalScalar out;
    Exponents e{};
    e[static_cast<std::size_t>(s)] = power;
    out.terms_.emplace(e, ComplexSurd(1));
    return out;
  }
  static FormalScalar rational(const Rational& r) { return FormalScalar(ComplexSurd::rational(r)); }
  static FormalScalar rational(long long num, long long den) { return rational(Rational(num, den)); }
  static FormalScalar i() { return FormalScalar(ComplexSurd::i()); }
  static FormalScalar inv_sqrt2() { return FormalScalar(ComplexSurd::inv_sqrt2()); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// True when the value is a number (no symbol appears).
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{}); }

  ComplexSurd constant_term() const {
    auto it = terms_.find(Exponents{});
    return it == terms_.end() ? ComplexSurd{} : it->second;
  }

  /// Coefficient of a given monomial.
  ComplexSurd coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ComplexSurd{} : it->second;
  }

  /// Total degree in the listed symbols (0 for the zero scalar).
  int degree_in(std::initializer_list<Symbol> symbols) const {
    int best = 0;
    for (const auto& [e, c] : terms_) {
      int d = 0;
      for (Symbol s : symbols) d += e[static_cast<std::size_t>(s)];
      best = std::max(best, d);
    }
    return best;
  }

  /// Symbols are real, so conjugation acts on the coefficients only.
  FormalScalar conj() const {
    FormalScalar out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.conj());
    return out;
  }

  FormalScalar operator-() const {
    FormalScalar out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
  }

  FormalScalar& operator+=(const FormalScalar& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  FormalScalar& operator-=(const FormalScalar& o) { return *this += -o; }

  friend FormalScalar operator+(FormalScalar a, const FormalScalar& b) { return a += b; }
  friend FormalScalar operator-(FormalScalar a, const FormalScalar& b) { return a -= b; }

  friend FormalScalar operator*(const FormalScalar& a, const FormalScalar& b) {
    FormalScalar out;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e{};
        for (std::size_t n = 0; n < kSymbolCount; ++n) e[n] = ea[n] + eb[n];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }
  FormalScalar& operator*=(const FormalScalar& o) { return *this = *this * o; }

  FormalScalar pow(int n) const {
    FormalScalar out(1);
    for (int m = 0; m < n; ++m) out *= *this;
    return out;
  }

  friend bool operator==(const FormalScalar& a, const FormalScalar& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const FormalScalar& a, const FormalScalar& b) { return !(a == b); }

  /// Numeric value with symbols bound in the order (alpha, k, l, t).
  std::complex<double> evaluate(const std::array<double, kSymbolCount>& values) const {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [e, c] : terms_) {
      std::complex<double> term = c.to_complex();
      for (std::size_t n = 0; n < kSymbolCount; ++n) {
        for (int p = 0; p < e[n]; ++p) term *= values[n];
      }
      sum += term;
    }
    return sum;
  }

  /// Deterministic plain-text rendering, e.g. "-(1/4)*k^2 + (1/2)*a*k*l".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      std::string monomial;
      for (std::size_t n = 0; n < kSymbolCount; ++n) {
        if (e[n] == 0) continue;
        if (!monomial.empty()) monomial += "*";
        monomial += symbol_name(static_cast<Symbol>(n));
        if (e[n] > 1) monomial += "^" + std::to_string(e[n]);
      }
      std::string piece;
      if (monomial.empty()) {
        piece = c.to_string();
      } else if (c == ComplexSurd(1)) {
        piece = monomial;
      } else if (c == ComplexSurd(-1)) {
        piece = "-" + monomial;
      } else {
        piece = c.to_string() + "*" + monomial;
      }
      if (first) {
        out = piece;
        first = false;
      } else if (piece.front() == '-') {
        out += " - " + piece.substr(1);
      } else {
        out += " + " + piece;
      }
    }
    return out;
  }

 private:
  void add_term(const Exponents& e, const ComplexSurd& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  TermMap terms_;
};

}  // namespace qsc
