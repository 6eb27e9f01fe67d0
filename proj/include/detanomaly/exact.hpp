#pragma once

// Exact scalar types used by the symbol engine and by configuration parsing.
//
// Degrees of homogeneity, model parameters (c, s, k) and symbol coefficients
// are carried as rationals so that cancellations in the symbol algebra are
// exact rather than tolerance based. Coefficients of trigonometric
// polynomials live in the Gaussian rationals Q(i).

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <optional>
#include <string>
#include <string_view>

namespace detanomaly {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q);

/// Parses "3", "-1/2", "0.125", "1e-3", "2.5e2" exactly.
/// Returns std::nullopt on malformed input.
std::optional<Rational> parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// Integer power with integer exponent (negative allowed for q != 0).
Rational pow_int(const Rational& q, long e);

/// Floor of a rational as a long.
long floor_to_long(const Rational& q);

bool is_integer(const Rational& q);

/// Element of Q(i).
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(Rational r) : re(std::move(r)) {}  // NOLINT: implicit lift
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

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
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  GaussRational& operator*=(const Rational& q) {
    re *= q;
    im *= q;
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator*(GaussRational a, const Rational& q) { return a *= q; }
  friend GaussRational operator-(GaussRational a) {
    a.re = -a.re;
    a.im = -a.im;
    return a;
  }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

std::string to_string(const GaussRational& g);

}  // namespace detanomaly
