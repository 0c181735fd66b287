#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsc {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline std::string rational_string(const Rational& r) {
  if (r < 0) return "-" + rational_string(-r);
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return "(" + numerator(r).str() + "/" + denominator(r).str() + ")";
}

inline double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace detail

// Exact element of the field Q(i, sqrt2):
//   re + re_s2*sqrt2 + i*(im + im_s2*sqrt2).
class ComplexSurd {
 public:
  ComplexSurd() = default;
  ComplexSurd(long long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  ComplexSurd(Rational re, Rational re_s2, Rational im, Rational im_s2)
      : re_(std::move(re)), re_s2_(std::move(re_s2)), im_(std::move(im)), im_s2_(std::move(im_s2)) {}

  static ComplexSurd rational(const Rational& r) { return {r, 0, 0, 0}; }
  static ComplexSurd i() { return {0, 0, 1, 0}; }
  static ComplexSurd sqrt2() { return {0, 1, 0, 0}; }
  static ComplexSurd inv_sqrt2() { return {0, Rational(1, 2), 0, 0}; }

  const Rational& re() const { return re_; }
  const Rational& re_s2() const { return re_s2_; }
  const Rational& im() const { return im_; }
  const Rational& im_s2() const { return im_s2_; }

  bool is_zero() const { return re_ == 0 && re_s2_ == 0 && im_ == 0 && im_s2_ == 0; }
  bool is_real() const { return im_ == 0 && im_s2_ == 0; }

  ComplexSurd conj() const { return {re_, re_s2_, -im_, -im_s2_}; }

  ComplexSurd operator-() const { return {-re_, -re_s2_, -im_, -im_s2_}; }

  ComplexSurd& operator+=(const ComplexSurd& o) {
    re_ += o.re_;
    re_s2_ += o.re_s2_;
    im_ += o.im_;
    im_s2_ += o.im_s2_;
    return *this;
  }
  ComplexSurd& operator-=(const ComplexSurd& o) { return *this += -o; }

  friend ComplexSurd operator+(ComplexSurd a, const ComplexSurd& b) { return a += b; }
  friend ComplexSurd operator-(ComplexSurd a, const ComplexSurd& b) { return a -= b; }

  friend ComplexSurd operator*(const ComplexSurd& a, const ComplexSurd& b) {
    // (u + iv)(w + iz) with u, v, w, z in Q(sqrt2)
    auto [uw0, uw1] = mul_surd(a.re_, a.re_s2_, b.re_, b.re_s2_);
    auto [vz0, vz1] = mul_surd(a.im_, a.im_s2_, b.im_, b.im_s2_);
    auto [uz0, uz1] = mul_surd(a.re_, a.re_s2_, b.im_, b.im_s2_);
    auto [vw0, vw1] = mul_surd(a.im_, a.im_s2_, b.re_, b.re_s2_);
    return {uw0 - vz0, uw1 - vz1, uz0 + vw0, uz1 + vw1};
  }
  ComplexSurd& operator*=(const ComplexSurd& o) { return *this = *this * o; }

  ComplexSurd inverse() const {
    if (is_zero()) throw std::domain_error("ComplexSurd: division by zero");
    // |z|^2 = u^2 + v^2 = n0 + n1*sqrt2; its inverse is (n0 - n1*sqrt2)/(n0^2 - 2 n1^2).
    auto [uu0, uu1] = mul_surd(re_, re_s2_, re_, re_s2_);
    auto [vv0, vv1] = mul_surd(im_, im_s2_, im_, im_s2_);
    Rational n0 = uu0 + vv0;
    Rational n1 = uu1 + vv1;
    Rational norm = n0 * n0 - 2 * n1 * n1;
    ComplexSurd inv_abs2{n0 / norm, -n1 / norm, 0, 0};
    return conj() * inv_abs2;
  }

  friend ComplexSurd operator/(const ComplexSurd& a, const ComplexSurd& b) { return a * b.inverse(); }

  friend bool operator==(const ComplexSurd& a, const ComplexSurd& b) {
    return a.re_ == b.re_ && a.re_s2_ == b.re_s2_ && a.im_ == b.im_ && a.im_s2_ == b.im_s2_;
  }
  friend bool operator!=(const ComplexSurd& a, const ComplexSurd& b) { return !(a == b); }

  std::complex<double> to_complex() const {
    const double s = std::sqrt(2.0);
    return {detail::rational_to_double(re_) + s * detail::rational_to_double(re_s2_),
            detail::rational_to_double(im_) + s * detail::rational_to_double(im_s2_)};
  }

  // Single components render bare ("(1/2)", "i", "-sqrt2"); mixed ones as a
  // parenthesised sum.
  std::string to_string() const {
    std::vector<std::string> parts;
    auto push = [&parts](const Rational& r, const char* unit) {
      if (r == 0) return;
      std::string u(unit);
      if (u.empty()) {
        parts.push_back(detail::rational_string(r));
      } else if (r == 1) {
        parts.push_back(u);
      } else if (r == -1) {
        parts.push_back("-" + u);
      } else {
        parts.push_back(detail::rational_string(r) + "*" + u);
      }
    };
    push(re_, "");
    push(re_s2_, "sqrt2");
    push(im_, "i");
    push(im_s2_, "i*sqrt2");
    if (parts.empty()) return "0";
    if (parts.size() == 1) return parts.front();
    std::string out = "(" + parts.front();
    for (std::size_t n = 1; n < parts.size(); ++n) {
      const std::string& p = parts[n];
      if (p.front() == '-') {
        out += " - " + p.substr(1);
      } else {
        out += " + " + p;
      }
    }
    return out + ")";
  }

 private:
  static std::pair<Rational, Rational> mul_surd(const Rational& a0, const Rational& a1, const Rational& b0,
                                                const Rational& b1) {
    return {a0 * b0 + 2 * a1 * b1, a0 * b1 + a1 * b0};
  }

  Rational re_{0};
  Rational re_s2_{0};
  Rational im_{0};
  Rational im_s2_{0};
};

}  // namespace qsc
