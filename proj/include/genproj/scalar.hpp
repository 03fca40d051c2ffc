#pragma once

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace genproj {

using cplx = std::complex<double>;
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact complex number with rational real and imaginary parts.
struct GaussRational {
  Rational re;
  Rational im;

  GaussRational() = default;
  GaussRational(int v) : re(v) {}  // NOLINT(google-explicit-constructor)
  GaussRational(long long v) : re(v) {}  // NOLINT
  GaussRational(Rational r) : re(std::move(r)) {}  // NOLINT
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRational imaginary_unit() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GaussRational conj() const { return {re, -im}; }
  /// |z|^2, exact.
  Rational norm() const { return re * re + im * im; }
  cplx to_complex() const { return {to_double(re), to_double(im)}; }

  GaussRational operator-() const { return {-re, -im}; }

  GaussRational& operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    if (im == 0 && o.im == 0) {
      re *= o.re;
      return *this;
    }
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    if (o.is_zero()) throw std::domain_error("GaussRational: division by zero");
    if (im == 0 && o.im == 0) {
      re /= o.re;
      return *this;
    }
    Rational d = o.norm();
    Rational r = (re * o.re + im * o.im) / d;
    Rational i = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const GaussRational& z) {
    if (z.im == 0) return os << to_string(z.re);
    if (z.re == 0) return os << to_string(z.im) << "*i";
    return os << "(" << to_string(z.re) << (z.im < 0 ? " - " : " + ")
              << to_string(z.im < 0 ? Rational(-z.im) : z.im) << "*i)";
  }
};

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, GaussRational>;

/// Converts an exact coefficient into the scalar type of an evaluation path.
template <class S>
S scalar_from(const GaussRational& c) {
  if constexpr (is_exact_v<S>) {
    return c;
  } else {
    return S(c.to_complex());
  }
}

inline double magnitude(const cplx& z) { return std::abs(z); }
inline double magnitude(const GaussRational& z) { return std::abs(z.to_complex()); }

inline bool is_zero(const cplx& z) { return z == cplx(0.0); }
inline bool is_zero(const GaussRational& z) { return z.is_zero(); }

}  // namespace genproj
