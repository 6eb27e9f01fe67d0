#include "detanomaly/errors.hpp"
#include "detanomaly/residue.hpp"
#include "detanomaly/symbol.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

using namespace detanomaly;
using namespace detanomaly::symbol;

namespace {

const Rational kHalf(1, 2);

TrigPolynomial exp_ix(GaussRational c = Rational(1), int mode = 1) { return TrigPolynomial::from_modes({{mode, c}}); }

TrigPolynomial cosine(Rational amplitude) {
  // amplitude * cos x
  const GaussRational half{Rational(amplitude / 2)};
  return TrigPolynomial::from_modes({{1, half}, {-1, half}});
}

RayPair both(const TrigPolynomial& t) { return {t, t}; }

// (1/2 pi i) int_Gamma log(lambda) (lambda - a)^{-j} d lambda by direct
// quadrature: both banks of the cut on (-inf, -eps] and the circle |lambda| = eps.
double contour_quadrature(int j, double a) {
  const double eps = a / 2;
  // banks: the jump of log across the cut leaves int_eps^inf (-1)^j (x + a)^{-j} dx;
  // substitute x = eps + u/(1-u)
  const int n = 20000;
  auto bank = [&](double u) {
    if (u >= 1.0) return j == 2 ? 1.0 : 0.0;
    const double x = eps + u / (1 - u);
    const double jac = 1 / ((1 - u) * (1 - u));
    return std::pow(-1.0, j) * std::pow(x + a, -j) * jac;
  };
  double line = 0;
  const double h = 1.0 / n;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    line += w * bank(i * h);
  }
  line *= h / 3;
  // circle traversed clockwise from theta = pi to -pi
  std::complex<double> circle{0, 0};
  const double dt = -2 * std::numbers::pi / n;
  for (int i = 0; i <= n; ++i) {
    const double th = std::numbers::pi + i * dt;
    const std::complex<double> lam = std::polar(eps, th);
    const std::complex<double> lg(std::log(eps), th);
    const std::complex<double> f = lg * std::pow(lam - a, -j) * std::complex<double>(0, 1) * lam;
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    circle += w * f;
  }
  circle *= dt / 3;
  circle /= std::complex<double>(0, 2 * std::numbers::pi);
  return line + circle.real();
}

}  // namespace

TEST_CASE("x-independent symbols compose pointwise") {
  const auto a = ClassicalSymbol::power(Rational(2), Rational(3), Rational(-5));
  const auto b = ClassicalSymbol::power(-kHalf, Rational(1, 10), Rational(-5));
  const auto ab = compose(a, b, Rational(-5));
  REQUIRE(ab.components().size() == 1);
  CHECK(ab.component(Rational(3, 2)) == both(TrigPolynomial::constant(Rational(3, 10))));
}

TEST_CASE("first derivative term of xi o e^{ix}") {
  ClassicalSymbol xi(Rational(-3));
  xi.add(Rational(1), {TrigPolynomial::constant(Rational(1)), TrigPolynomial::constant(Rational(-1))});
  const auto b = ClassicalSymbol::multiplier(Rational(0), exp_ix(), Rational(-3));
  const auto ab = compose(xi, b, Rational(-3));
  const RayPair top = ab.component(Rational(1));
  CHECK(top.plus == exp_ix());
  CHECK(top.minus == exp_ix(Rational(-1)));
  // (d_xi xi)(D_x e^{ix}) = 1 * e^{ix} on both rays
  CHECK(ab.component(Rational(0)) == both(exp_ix()));
  CHECK(ab.components().size() == 2);
}

TEST_CASE("composition is associative on x-dependent symbols") {
  const Rational cut(-4);
  auto a = ClassicalSymbol::multiplier(Rational(1), exp_ix() + TrigPolynomial::constant(Rational(2)), cut);
  a.add(Rational(0), both(exp_ix(Rational(3), -2)));
  const auto b = ClassicalSymbol::multiplier(-kHalf, cosine(Rational(1, 5)), cut);
  const auto c = ClassicalSymbol::multiplier(Rational(-1), exp_ix(GaussRational(Rational(0), Rational(1))), cut);
  // a has order 1, so the inner product on the right needs one extra degree
  CHECK(compose(compose(a, b, cut), c, cut) == compose(a, compose(b, c, cut - 1), cut));
}

TEST_CASE("parametrix of |xi|^2 is a single piece") {
  const auto a = ClassicalSymbol::power(Rational(2), Rational(1), Rational(-6));
  const auto r = resolvent_parametrix(a, Rational(-8));
  REQUIRE(r.terms().size() == 1);
  CHECK(r.coefficient(Rational(-2), 1) == both(TrigPolynomial::constant(Rational(1))));
}

TEST_CASE("parametrix of |xi|^2 + v(x)") {
  auto a = ClassicalSymbol::power(Rational(2), Rational(1), Rational(-6));
  const TrigPolynomial v = cosine(Rational(1, 3));
  a.add(Rational(0), both(v));
  const Rational cut(-8);
  const auto r = resolvent_parametrix(a, cut);
  CHECK(r.coefficient(Rational(-2), 1) == both(TrigPolynomial::constant(Rational(1))));
  // no weight -3 piece; v (lambda - |xi|^2)^{-2} at weight -4
  CHECK(r.coefficient(Rational(-3), 1).is_zero());
  CHECK(r.coefficient(Rational(-4), 2) == both(v));

  SUBCASE("two-sided inverse down to the cutoff") {
    const auto lam = ParameterSymbol::lambda_minus(a, cut + 2);
    const auto right = compose(lam, r, cut + 2);
    const auto left = compose(r, lam, cut + 2);
    for (const auto* prod : {&right, &left}) {
      REQUIRE(prod->terms().size() == 1);
      CHECK(prod->coefficient(Rational(0), 0) == both(TrigPolynomial::constant(Rational(1))));
    }
  }

  SUBCASE("pointwise check of the defect") {
    const auto lam = ParameterSymbol::lambda_minus(a, cut + 2);
    const auto prod = compose(lam, r, cut + 2);
    const std::complex<double> lambda(-3.0, 1.5);
    CHECK(std::abs(prod.evaluate(0.7, 5.0, lambda) - 1.0) < 1e-14);
  }
}

TEST_CASE("vanishing principal symbol is rejected") {
  const auto a = ClassicalSymbol::multiplier(Rational(2), cosine(Rational(1)), Rational(-4));
  CHECK_THROWS_AS(resolvent_parametrix(a, Rational(-6)), ContractViolation);
}

TEST_CASE("resolvent difference principal terms") {
  const auto a = ClassicalSymbol::power(Rational(2), Rational(1), Rational(-6));
  const auto tau = ClassicalSymbol::power(-kHalf, Rational(1, 10), Rational(-6));
  const auto diffs = resolvent_difference(a, tau, 3, Rational(-6));
  REQUIRE(diffs.size() == 4);
  // q = 1: a_k tau / (lambda - a_k)^2 at weight -k - s
  CHECK(diffs[1].max_weight() == Rational(-5, 2));
  CHECK(diffs[1].coefficient(Rational(-5, 2), 2) == both(TrigPolynomial::constant(Rational(1, 10))));
  // q = 2, commutative: a^2 tau^2 (lambda - a)^{-3}
  CHECK(diffs[2].max_weight() == Rational(-3));
  CHECK(diffs[2].coefficient(Rational(-3), 3) == both(TrigPolynomial::constant(Rational(1, 100))));
  for (int q = 1; q <= 3; ++q)
    for (const auto& w : diffs[q].weights()) CHECK(diffs[q].coefficient(w, 1).is_zero());
}

TEST_CASE("resolvent difference of x-dependent symbols has no residue at lambda = a_k") {
  auto a = ClassicalSymbol::power(Rational(2), Rational(1), Rational(-8));
  a.add(Rational(1), both(exp_ix(Rational(1, 2))));
  a.add(Rational(0), both(cosine(Rational(1, 3))));
  auto tau = ClassicalSymbol::multiplier(-kHalf, cosine(Rational(2, 5)) + TrigPolynomial::constant(Rational(1, 7)),
                                         Rational(-8));
  const auto diffs = resolvent_difference(a, tau, 3, Rational(-5));
  for (int q = 1; q <= 3; ++q) {
    CAPTURE(q);
    CHECK(!diffs[q].is_zero());
    CHECK(diffs[q].max_weight() == Rational(-2) - kHalf * q);
    for (const auto& w : diffs[q].weights()) CHECK(diffs[q].coefficient(w, 1).is_zero());
    CHECK_NOTHROW(contour_log(diffs[q]));
  }
}

TEST_CASE("log contour kernel against quadrature") {
  for (double a : {0.7, 1.0, 4.0}) {
    for (int j : {2, 3, 4, 5}) {
      CAPTURE(a);
      CAPTURE(j);
      CHECK(std::abs(log_contour_kernel(j, a) - contour_quadrature(j, a)) < 1e-9);
    }
  }
  CHECK(std::abs(log_contour_kernel(2, 3.0) - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(log_contour_kernel(1, 3.0) - std::log(3.0)) < 1e-15);
  // homogeneity I_j(mu a) = mu^{1-j} I_j(a)
  for (int j : {2, 3, 6}) CHECK(std::abs(log_contour_kernel(j, 2.5 * 1.7) - std::pow(2.5, 1 - j) * log_contour_kernel(j, 1.7)) < 1e-14);
}

TEST_CASE("contour_log rejects a surviving simple pole") {
  const auto a = ClassicalSymbol::power(Rational(2), Rational(1), Rational(-6));
  const auto r = resolvent_parametrix(a, Rational(-6));
  CHECK_THROWS_AS(contour_log(r), ContractViolation);
  ResolventSymbol c2(principal_symbol(a), Rational(-6));
  c2.add({Rational(0), 2}, both(TrigPolynomial::constant(Rational(3))));
  c2.add({Rational(0), 3}, both(TrigPolynomial::constant(Rational(5))));
  const auto l = contour_log(c2);
  // 3 I_2 + 5 I_3 = 3 |xi|^{-2} - (5/2) |xi|^{-4}
  CHECK(l.component(Rational(-2)) == both(TrigPolynomial::constant(Rational(3))));
  CHECK(l.component(Rational(-4)) == both(TrigPolynomial::constant(Rational(-5, 2))));
}

TEST_CASE("commutative limit: Q_p symbol is the scalar Taylor series of tau^p log(1 + t tau)") {
  const Rational c(1, 10);
  for (const Rational& s : {kHalf, Rational(1, 3), Rational(3, 4)}) {
    for (int p : {1, 2}) {
      auto a = ClassicalSymbol::power(Rational(2), Rational(1), Rational(-10));
      a.add(Rational(1), both(TrigPolynomial::constant(Rational(3))));
      a.add(Rational(0), both(TrigPolynomial::constant(Rational(1, 2))));
      const auto tau = ClassicalSymbol::power(-s, c, Rational(-10));
      const Rational cutoff(-3);
      const auto q = qp_symbol(tau, p, a, 4, cutoff);
      for (int j = 1; j <= 4; ++j) {
        CAPTURE(j);
        ClassicalSymbol expected(cutoff);
        expected.add(-s * (p + j), both(TrigPolynomial::constant(pow_int(c, p + j) * Rational(j % 2 ? 1 : -1, j))));
        CHECK(q[j] == expected);
      }
    }
  }
}

TEST_CASE("degree -1 part of Q_1 for s = 1/2 is t tau^2") {
  const Rational cutoff(-1);
  auto a = ClassicalSymbol::power(Rational(2), Rational(1), Rational(-6));
  a.add(Rational(0), both(cosine(Rational(1, 4))));
  const TrigPolynomial u = cosine(Rational(1, 5)) + TrigPolynomial::constant(Rational(1, 10));
  const auto tau = ClassicalSymbol::multiplier(-kHalf, u, Rational(-6));
  const auto q = qp_symbol(tau, 1, a, 2, cutoff);
  CHECK(q[1].component(Rational(-1)) == both(u * u));
  // grading: the (q, p) term starts at degree -(q+p)s
  CHECK(q[1].order() == Rational(-1));
  CHECK(q[2].is_zero());
}

TEST_CASE("Wodzicki residue on the circle") {
  const double rho = residue_normalization(1);
  CHECK(std::abs(rho + 1 / (2 * std::numbers::pi)) < 1e-16);
  const auto sym = ClassicalSymbol::power(Rational(-1), Rational(3, 10), Rational(-4));
  CHECK(std::abs(wodzicki_residue(sym) - rho * 2 * 2 * std::numbers::pi * 0.3) < 1e-15);
  CHECK(wodzicki_residue(ClassicalSymbol::power(Rational(-3, 2), Rational(1), Rational(-4))) == 0.0);
  CHECK(wodzicki_residue(ClassicalSymbol::multiplier(Rational(-1), exp_ix(), Rational(-4))) == 0.0);
}

TEST_CASE("residue polynomial") {
  const auto a = ClassicalSymbol::power(Rational(2), Rational(1), Rational(-6));
  const Rational c(1, 10);

  SUBCASE("s = 1/2, p = 1: a single t term") {
    const auto tau = ClassicalSymbol::power(-kHalf, c, Rational(-6));
    const auto res = res_qp_polynomial(tau, 1, a);
    REQUIRE(res.density.size() == 1);
    CHECK(res.density.at(1) == GaussRational(2 * c * c));
    // rho * 2 pi * 2 c^2 = -2 c^2
    CHECK(std::abs(res.coefficient(1) + 2 * 0.01) < 1e-15);
    CHECK(std::abs(res.integrate_against_power(1) + 0.01) < 1e-15);
  }
  SUBCASE("s = 1/2, p = 2 vanishes") {
    const auto tau = ClassicalSymbol::power(-kHalf, c, Rational(-6));
    CHECK(res_qp_polynomial(tau, 2, a).is_exactly_zero());
  }
  SUBCASE("p >= d/s gives the empty polynomial") {
    const auto tau = ClassicalSymbol::power(Rational(-2), c, Rational(-6));
    const auto res = res_qp_polynomial(tau, 1, a);
    CHECK(res.density.empty());
    CHECK(res.is_exactly_zero());
  }
  SUBCASE("s = 1/3, p = 1: only t^2 contributes") {
    const auto tau = ClassicalSymbol::power(Rational(-1, 3), c, Rational(-6));
    const auto res = res_qp_polynomial(tau, 1, a);
    CHECK(res.density.at(1).is_zero());
    // tau log(1 + t tau): t^2 coefficient -c^3/2, both rays
    CHECK(res.density.at(2) == GaussRational(-pow_int(c, 3)));
  }
}
