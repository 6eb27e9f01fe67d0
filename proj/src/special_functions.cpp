#include "detanomaly/special_functions.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace detanomaly {

namespace {

Jet operator+(Jet a, const Jet& b) { return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(Jet a, const Jet& b) { return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator*(const Jet& a, const Jet& b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}
Jet operator*(double c, const Jet& a) { return {c * a.value, c * a.d1, c * a.d2}; }
Jet operator+(const Jet& a, double c) { return {a.value + c, a.d1, a.d2}; }
Jet inverse(const Jet& b) {
  const double v = b.value;
  return {1.0 / v, -b.d1 / (v * v), 2.0 * b.d1 * b.d1 / (v * v * v) - b.d2 / (v * v)};
}
Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
Jet exp(const Jet& a) {
  const double e = std::exp(a.value);
  return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}

// (base)^(-s) for base > 0.
double pow_neg(double s, double base) { return std::exp(-s * std::log(base)); }
std::complex<double> pow_neg(std::complex<double> s, double base) { return std::exp(-s * std::log(base)); }
Jet pow_neg(const Jet& s, double base) { return exp((-std::log(base)) * s); }

double lift(double c, double) { return c; }
std::complex<double> lift(double c, std::complex<double>) { return {c, 0.0}; }
Jet lift(double c, const Jet&) { return {c, 0.0, 0.0}; }

// B_{2j} / (2j)! for j = 1..12.
constexpr std::array<double, 12> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
    854513.0 / 138.0 / 1.1240007277776077e21,
    -236364091.0 / 2730.0 / 6.204484017332394e23,
};

constexpr int kDirectTerms = 25;

// Everything in the Euler–Maclaurin formula except the (M+a)^{1-s}/(s-1)
// integral term.
template <class S>
S euler_maclaurin_body(const S& s, double a) {
  S sum = lift(0.0, s);
  for (int n = 0; n < kDirectTerms; ++n) sum = sum + pow_neg(s, n + a);
  const double big = kDirectTerms + a;
  sum = sum + lift(0.5, s) * pow_neg(s, big);
  // rising factorial (s)_{2j-1} = s (s+1) ... (s+2j-2)
  S rising = s;
  S power = pow_neg(s, big) * lift(1.0 / big, s);  // (M+a)^{-s-1}
  const double inv_big_sq = 1.0 / (big * big);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    sum = sum + lift(kBernoulliOverFactorial[j], s) * rising * power;
    const double m = 2.0 * static_cast<double>(j) + 1.0;
    rising = rising * (s + lift(m, s)) * (s + lift(m + 1.0, s));
    power = power * lift(inv_big_sq, s);
  }
  return sum;
}

}  // namespace

double hurwitz_zeta(double s, double a) {
  if (s == 1.0) throw std::domain_error("hurwitz_zeta: pole at s = 1");
  const double big = kDirectTerms + a;
  return euler_maclaurin_body(s, a) + std::exp((1.0 - s) * std::log(big)) / (s - 1.0);
}

std::complex<double> hurwitz_zeta(std::complex<double> s, double a) {
  if (s == std::complex<double>(1.0, 0.0)) throw std::domain_error("hurwitz_zeta: pole at s = 1");
  const double big = kDirectTerms + a;
  return euler_maclaurin_body(s, a) + std::exp((1.0 - s) * std::log(big)) / (s - 1.0);
}

Jet hurwitz_jet(double s0, double a) {
  const Jet s{s0, 1.0, 0.0};
  const double big = kDirectTerms + a;
  const double log_big = std::log(big);
  Jet integral_term;
  if (s0 == 1.0) {
    // ((M+a)^{1-s} - 1)/(s-1) expanded in e = s - 1
    integral_term = {-log_big, log_big * log_big / 2.0, -log_big * log_big * log_big / 3.0};
  } else {
    integral_term = pow_neg(s + (-1.0), big) / (s + (-1.0));
  }
  return euler_maclaurin_body(s, a) + integral_term;
}

ZetaLaurent riemann_zeta_laurent(double s0) {
  const Jet j = hurwitz_jet(s0, 1.0);
  return {s0 == 1.0 ? 1.0 : 0.0, j.value, j.d1};
}

Jet dirichlet_beta_jet(double s0) {
  // beta(s) = 4^{-s} (zeta(s, 1/4) - zeta(s, 3/4)); at s0 = 1 both regular
  // parts carry the same subtracted pole, which cancels in the difference.
  const Jet s{s0, 1.0, 0.0};
  return pow_neg(s, 4.0) * (hurwitz_jet(s0, 0.25) - hurwitz_jet(s0, 0.75));
}

ZetaLaurent square_lattice_zeta_laurent(double s0) {
  const Jet beta = dirichlet_beta_jet(s0);
  const Jet zeta = hurwitz_jet(s0, 1.0);
  if (s0 == 1.0) {
    // 4 (1/e + z0 + z1 e)(b0 + b1 e + b2 e^2/2)
    return {4.0 * beta.value, 4.0 * (zeta.value * beta.value + beta.d1),
            4.0 * (zeta.d1 * beta.value + zeta.value * beta.d1 + beta.d2 / 2.0)};
  }
  const Jet prod = 4.0 * (zeta * beta);
  return {0.0, prod.value, prod.d1};
}

}  // namespace detanomaly
