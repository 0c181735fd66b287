#pragma once

#include "qsc/algebra/weyl_term.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsc {

/// dX = cA dA + cAstar dA* + cT dt.
///
/// Coefficients are in "argument form": when the differential belongs to a
/// flow U* Z U, a stored coefficient Y stands for U* Y U.
struct ItoDifferential {
  WeylTerm cA;
  WeylTerm cAstar;
  WeylTerm cT;

  static ItoDifferential dA(const WeylTerm& c = 1) { return {c, {}, {}}; }
  static ItoDifferential dAstar(const WeylTerm& c = 1) { return {{}, c, {}}; }
  static ItoDifferential dt(const WeylTerm& c = 1) { return {{}, {}, c}; }

  bool is_zero() const { return cA.is_zero() && cAstar.is_zero() && cT.is_zero(); }

  ItoDifferential& operator+=(const ItoDifferential& o) {
    cA += o.cA;
    cAstar += o.cAstar;
    cT += o.cT;
    return *this;
  }
  ItoDifferential& operator-=(const ItoDifferential& o) {
    cA -= o.cA;
    cAstar -= o.cAstar;
    cT -= o.cT;
    return *this;
  }
  friend ItoDifferential operator+(ItoDifferential a, const ItoDifferential& b) { return a += b; }
  friend ItoDifferential operator-(ItoDifferential a, const ItoDifferential& b) { return a -= b; }
  friend ItoDifferential operator*(const FormalScalar& s, const ItoDifferential& d) {
    return {s * d.cA, s * d.cAstar, s * d.cT};
  }

  friend bool operator==(const ItoDifferential& a, const ItoDifferential& b) {
    return a.cA == b.cA && a.cAstar == b.cAstar && a.cT == b.cT;
  }
  friend bool operator!=(const ItoDifferential& a, const ItoDifferential& b) { return !(a == b); }

  std::string to_string() const {
    std::vector<std::string> parts;
    if (!cA.is_zero()) parts.push_back("[" + cA.to_string() + "]*dA");
    if (!cAstar.is_zero()) parts.push_back("[" + cAstar.to_string() + "]*dA*");
    if (!cT.is_zero()) parts.push_back("[" + cT.to_string() + "]*dt");
    if (parts.empty()) return "0";
    std::string out = parts.front();
    for (std::size_t n = 1; n < parts.size(); ++n) out += " + " + parts[n];
    return out;
  }
};

/// Quantum Ito table with dA dA* = dt the only surviving entry:
/// (C dA + D dA* + E dt)(F dA + G dA* + H dt) = C G dt.
inline ItoDifferential ito_product(const ItoDifferential& dx, const ItoDifferential& dy) {
  return ItoDifferential::dt(dx.cA * dy.cAstar);
}

/// Drops the increments: dA annihilates the vacuum on the right and dA* on
/// the left, so only the dt part survives a vacuum expectation.
inline WeylTerm vacuum_expectation(const ItoDifferential& dx) { return dx.cT; }

/// One factor Z_i of a product Z_1 ... Z_p together with dZ_i.
///
/// A `central` factor has a value that commutes with every system operator and
/// every increment (a field quadrature, for instance). Its value is carried as
/// the identity and subset terms that keep it undifferentiated are collected
/// separately as multiples of that central value.
struct ProductFactor {
  std::string label;
  WeylTerm value;
  ItoDifferential differential;
  bool central = false;
};

struct SubsetTerm {
  std::vector<std::size_t> subset;  // 1-based indices, ascending
  ItoDifferential value;
  bool central_weighted = false;
};

struct SubsetExpansion {
  std::vector<SubsetTerm> terms;
  ItoDifferential total;         // terms in which every central factor was differentiated
  ItoDifferential central_part;  // coefficient of the central value(s)
};

namespace detail {

// Element of the truncated graded algebra spanned by {1, dA, dA*, dt}.
struct Graded {
  WeylTerm unit;
  ItoDifferential diff;
};

inline Graded graded_product(const Graded& a, const Graded& b) {
  Graded out;
  out.unit = a.unit * b.unit;
  out.diff.cA = a.unit * b.diff.cA + a.diff.cA * b.unit;
  out.diff.cAstar = a.unit * b.diff.cAstar + a.diff.cAstar * b.unit;
  out.diff.cT = a.unit * b.diff.cT + a.diff.cT * b.unit + a.diff.cA * b.diff.cAstar;
  return out;
}

inline std::string subset_name(const std::vector<std::size_t>& subset) {
  std::string s = "{";
  for (std::size_t i : subset) s += std::to_string(i);
  return s + "}";
}

}  // namespace detail

/// d(Z_1 ... Z_p) as the sum over nonempty ordered subsets nu of the term
/// {nu}: factors in nu are replaced by their differentials, all others keep
/// their value, and increments multiply through the Ito table. Terms with
/// three or more increments vanish automatically.
inline SubsetExpansion subset_differential(const std::vector<ProductFactor>& factors) {
  if (factors.empty()) throw InvalidInput("subset_differential needs at least one factor");
  const std::size_t count = factors.size();
  SubsetExpansion out;
  // Enumerate by subset size, then lexicographically: {1},{2},{3},{12},{13},...
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t mask = 1; mask < (std::size_t{1} << count); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < count; ++i) {
      if (mask & (std::size_t{1} << i)) s.push_back(i + 1);
    }
    subsets.push_back(std::move(s));
  }
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });

  for (const auto& subset : subsets) {
    detail::Graded acc{WeylTerm(1), {}};
    bool central_weighted = false;
    std::size_t next = 0;
    for (std::size_t i = 0; i < count; ++i) {
      detail::Graded g;
      if (next < subset.size() && subset[next] == i + 1) {
        g.diff = factors[i].differential;
        ++next;
      } else {
        g.unit = factors[i].value;
        central_weighted = central_weighted || factors[i].central;
      }
      acc = detail::graded_product(acc, g);
    }
    if (!acc.unit.is_zero()) throw std::logic_error("nonempty subset term has an increment-free part");
    if (central_weighted) {
      out.central_part += acc.diff;
    } else {
      out.total += acc.diff;
    }
    out.terms.push_back({subset, acc.diff, central_weighted});
  }
  return out;
}

/// Deterministic transcript: one line per subset term, then the sums.
inline std::string transcript(const std::vector<ProductFactor>& factors, const SubsetExpansion& expansion) {
  std::ostringstream os;
  os << "d(";
  for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? " " : "") << factors[i].label;
  os << ")\n";
  for (const auto& term : expansion.terms) {
    os << "  " << detail::subset_name(term.subset) << (term.central_weighted ? " [central]" : "") << " = "
       << term.value.to_string() << "\n";
  }
  if (!expansion.central_part.is_zero() ||
      std::any_of(factors.begin(), factors.end(), [](const ProductFactor& f) { return f.central; })) {
    os << "  central terms sum = " << expansion.central_part.to_string() << "\n";
  }
  os << "  sum = " << expansion.total.to_string() << "\n";
  return os.str();
}

}  // namespace qsc
