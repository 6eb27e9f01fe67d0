#pragma once

// Graded symbol calculus on the circle.
//
// A homogeneous component of degree d is a pair of trigonometric polynomials
// (one per ray xi > 0, xi < 0); its value at (x, xi) is plus(x)|xi|^d for
// xi > 0 and minus(x)|xi|^d for xi < 0. Classical symbols are finite sums of
// such components. Symbols with parameter carry an extra factor
// (lambda - a_k(xi))^{-j}, where a_k = alpha_pm |xi|^k is the principal
// symbol of the operator whose resolvent is being expanded; lambda has
// weight k, so a term of coefficient degree d and pole order j has weight
// d - k j.
//
// All arithmetic is exact over Q(i) with rational degrees.

#include "detanomaly/exact.hpp"

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace detanomaly::symbol {

/// Finite Fourier series sum_m c_m e^{imx} with coefficients in Q(i).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  static TrigPolynomial constant(GaussRational c);
  static TrigPolynomial from_modes(std::map<int, GaussRational> modes);

  const std::map<int, GaussRational>& modes() const { return modes_; }
  bool is_zero() const { return modes_.empty(); }
  bool is_constant() const;
  GaussRational mean() const;
  GaussRational coefficient(int mode) const;
  std::complex<double> evaluate(double x) const;

  /// Applies D_x^order with D_x = -i d/dx, i.e. multiplies mode m by m^order.
  TrigPolynomial dx_power(int order) const;

  TrigPolynomial& operator+=(const TrigPolynomial& o);
  TrigPolynomial& operator-=(const TrigPolynomial& o);
  TrigPolynomial& operator*=(const GaussRational& c);
  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
  friend TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b) { return a -= b; }
  friend TrigPolynomial operator*(TrigPolynomial a, const GaussRational& c) { return a *= c; }
  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b);
  friend bool operator==(const TrigPolynomial& a, const TrigPolynomial& b) { return a.modes_ == b.modes_; }

 private:
  void prune();
  std::map<int, GaussRational> modes_;
};

/// Values on the two rays of the cosphere bundle of S^1.
struct RayPair {
  TrigPolynomial plus;
  TrigPolynomial minus;

  bool is_zero() const { return plus.is_zero() && minus.is_zero(); }
  RayPair& operator+=(const RayPair& o) {
    plus += o.plus;
    minus += o.minus;
    return *this;
  }
  RayPair& operator-=(const RayPair& o) {
    plus -= o.plus;
    minus -= o.minus;
    return *this;
  }
  friend RayPair operator*(const RayPair& a, const RayPair& b) { return {a.plus * b.plus, a.minus * b.minus}; }
  friend bool operator==(const RayPair& a, const RayPair& b) = default;
};

struct HomogeneousComponent {
  Rational degree;
  RayPair rays;
};

/// Classical symbol: components keyed by strictly decreasing degree; degrees
/// below the cutoff are discarded on insertion.
class ClassicalSymbol {
 public:
  using ComponentMap = std::map<Rational, RayPair, std::greater<>>;

  explicit ClassicalSymbol(Rational cutoff) : cutoff_(std::move(cutoff)) {}

  /// c |xi|^degree on both rays, x-independent.
  static ClassicalSymbol power(Rational degree, GaussRational c, Rational cutoff);
  /// u(x) |xi|^degree on both rays.
  static ClassicalSymbol multiplier(Rational degree, TrigPolynomial u, Rational cutoff);

  const Rational& cutoff() const { return cutoff_; }
  const ComponentMap& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }
  /// Leading degree; throws on the zero symbol.
  const Rational& order() const;
  /// Component of the given degree, zero pair if absent.
  RayPair component(const Rational& degree) const;
  bool is_x_independent() const;

  void add(const Rational& degree, const RayPair& rays);
  ClassicalSymbol truncated(Rational cutoff) const;
  ClassicalSymbol scaled(const GaussRational& c) const;

  ClassicalSymbol& operator+=(const ClassicalSymbol& o);
  ClassicalSymbol& operator-=(const ClassicalSymbol& o);
  friend bool operator==(const ClassicalSymbol& a, const ClassicalSymbol& b) {
    return a.components_ == b.components_;
  }

  /// Value at (x, xi), xi != 0, of the truncated asymptotic sum.
  std::complex<double> evaluate(double x, double xi) const;

 private:
  Rational cutoff_;
  ComponentMap components_;
};

/// Principal symbol alpha_pm |xi|^k with positive rational alpha_pm.
struct PrincipalSymbol {
  Rational order;
  Rational plus;
  Rational minus;
};

/// Extracts the principal symbol of a; requires x-independent positive
/// leading coefficients (the Agmon condition for the negative real cut).
PrincipalSymbol principal_symbol(const ClassicalSymbol& a);

/// Symbol with parameter: terms f(x, xi) (lambda - a_k)^{-j}.
/// Terms are keyed by (coefficient degree, pole order j); weight = degree - k j.
class ParameterSymbol {
 public:
  struct Key {
    Rational degree;
    int pole_order;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.degree != b.degree) return a.degree < b.degree;
      return a.pole_order < b.pole_order;
    }
  };
  using TermMap = std::map<Key, RayPair>;

  ParameterSymbol(PrincipalSymbol principal, Rational weight_cutoff)
      : principal_(std::move(principal)), cutoff_(std::move(weight_cutoff)) {}

  /// Lifts a classical symbol (pole order 0).
  static ParameterSymbol lift(const ClassicalSymbol& a, PrincipalSymbol principal, Rational weight_cutoff);
  /// The symbol lambda - a of the operator lambda I - A.
  static ParameterSymbol lambda_minus(const ClassicalSymbol& a, Rational weight_cutoff);

  const PrincipalSymbol& principal() const { return principal_; }
  const Rational& weight_cutoff() const { return cutoff_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational weight(const Key& key) const { return key.degree - principal_.order * key.pole_order; }
  /// Largest weight among the terms; throws on zero.
  Rational max_weight() const;

  /// Sum of coefficients of a given pole order in the homogeneous piece of a
  /// given weight.
  RayPair coefficient(const Rational& weight, int pole_order) const;
  /// Weights present, decreasing.
  std::vector<Rational> weights() const;

  void add(const Key& key, const RayPair& rays);
  ParameterSymbol truncated(Rational weight_cutoff) const;
  /// Multiplies pointwise by (lambda - a_k)^{-shift}.
  ParameterSymbol shifted_pole(int shift) const;
  /// First xi-derivative.
  ParameterSymbol xi_derivative() const;

  ParameterSymbol& operator+=(const ParameterSymbol& o);
  ParameterSymbol& operator-=(const ParameterSymbol& o);

  /// Value at (x, xi, lambda), lambda off the poles.
  std::complex<double> evaluate(double x, double xi, std::complex<double> lambda) const;

 private:
  PrincipalSymbol principal_;
  Rational cutoff_;
  TermMap terms_;
};

using ResolventSymbol = ParameterSymbol;

/// a o b ~ sum_alpha (1/alpha!) d_xi^alpha a * D_x^alpha b, down to cutoff.
ClassicalSymbol compose(const ClassicalSymbol& a, const ClassicalSymbol& b, const Rational& cutoff);

/// Composition in the algebra with parameter, truncated at the weight cutoff.
ParameterSymbol compose(const ParameterSymbol& a, const ParameterSymbol& b, const Rational& weight_cutoff);

/// p-fold composition tau o ... o tau.
ClassicalSymbol compose_power(const ClassicalSymbol& tau, int p, const Rational& cutoff);

/// Graded right inverse r of lambda - a: (lambda - a) o r = 1 down to the
/// weight cutoff.
ResolventSymbol resolvent_parametrix(const ClassicalSymbol& a, const Rational& weight_cutoff);

/// Entries q = 1..q_max of (lambda - a)^{-1} [a tau (lambda - a)^{-1}]^q;
/// element 0 of the result is the zero symbol.
std::vector<ResolventSymbol> resolvent_difference(const ClassicalSymbol& a, const ClassicalSymbol& tau, int q_max,
                                                  const Rational& weight_cutoff);

/// (1/2 pi i) int_Gamma log(lambda) (lambda - a)^{-j} d lambda for a > 0, with
/// Gamma encircling the positive axis counterclockwise and hugging the cut on
/// the negative axis. j = 1 gives log a; j >= 2 gives (-1)^j a^{1-j}/(j-1).
double log_contour_kernel(int pole_order, double a);

/// Exact rational factor (-1)^j / (j-1) of the kernel for j >= 2.
Rational log_contour_factor(int pole_order);

/// Applies the log-contour integral termwise; the result has classical degree
/// weight + k. Throws ContractViolation if a pole-order-1 term survives.
ClassicalSymbol contour_log(const ResolventSymbol& r);

/// Symbol of Q_p(t) = T^p [log(A(I+tT)) - log A] as a polynomial in t:
/// element q holds the coefficient of t^q (element 0 is zero).
std::vector<ClassicalSymbol> qp_symbol(const ClassicalSymbol& tau, int p, const ClassicalSymbol& a, int q_max,
                                       const Rational& cutoff);

}  // namespace detanomaly::symbol
