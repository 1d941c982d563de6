#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace dpp {

// Exact scalar backend: arbitrary-precision rationals.
using Rational = mpq_class;

// Numeric scalar backend used by the contour machinery.
using Complex = std::complex<double>;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  // Pivot-selection magnitude only; never used for exact comparisons.
  static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool is_zero(double x) { return x == 0.0; }
  static double magnitude(double x) { return std::fabs(x); }
};

template <>
struct scalar_traits<Complex> {
  static constexpr bool is_exact = false;
  static Complex zero() { return Complex(0.0, 0.0); }
  static Complex one() { return Complex(1.0, 0.0); }
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
  static double magnitude(const Complex& x) { return std::abs(x); }
};

// Parses "p/q" or "p"; canonicalizes sign and gcd.
Rational parse_rational(const std::string& text);

// Always emits the "p/q" form, q > 0, gcd(p,q) = 1.
std::string format_rational(const Rational& x);

std::string scalar_debug_string(const Rational& x);
std::string scalar_debug_string(double x);
std::string scalar_debug_string(const Complex& x);

inline Rational rational_pow(Rational base, long e) {
  Rational out(1);
  if (e < 0) {
    if (sgn(base) == 0) throw std::domain_error("rational_pow: 0 to a negative power");
    base = Rational(1) / base;
    e = -e;
  }
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

}  // namespace dpp
