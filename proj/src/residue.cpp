#include "detanomaly/residue.hpp"

#include "detanomaly/errors.hpp"

#include <cmath>
#include <numbers>

namespace detanomaly::symbol {

double base_residue_normalization(int dim) { return std::pow(2.0 * std::numbers::pi, -dim); }

double residue_normalization(int dim) { return kResidueCalibration * base_residue_normalization(dim); }

double residue_measure(int dim) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (dim == 1) return two_pi;
  if (dim == 2) return two_pi * two_pi * two_pi;
  throw UnsupportedOperation("residue in dimension " + std::to_string(dim));
}

GaussRational residue_density(const ClassicalSymbol& sym, int dim) {
  const RayPair comp = sym.component(Rational(-dim));
  if (dim == 1) return comp.plus.mean() + comp.minus.mean();
  if (dim == 2) {
    if (!sym.is_x_independent() || !(comp.plus == comp.minus))
      throw UnsupportedOperation("torus residue needs x-independent isotropic symbols");
    return comp.plus.mean();
  }
  throw UnsupportedOperation("residue in dimension " + std::to_string(dim));
}

double wodzicki_residue(const ClassicalSymbol& sym, int dim) {
  const GaussRational density = residue_density(sym, dim);
  if (density.is_zero()) return 0.0;
  return residue_normalization(dim) * residue_measure(dim) * density.to_complex().real();
}

bool ResiduePolynomial::is_exactly_zero() const {
  for (const auto& [j, g] : density)
    if (!g.is_zero()) return false;
  return true;
}

double ResiduePolynomial::coefficient(int j) const {
  auto it = density.find(j);
  if (it == density.end() || it->second.is_zero()) return 0.0;
  return rho * residue_measure(dim) * it->second.to_complex().real();
}

double ResiduePolynomial::evaluate(double t) const {
  double v = 0.0;
  for (const auto& [j, g] : density) v += coefficient(j) * std::pow(t, j);
  return v;
}

double ResiduePolynomial::integrate_against_power(int p) const {
  double v = 0.0;
  for (const auto& [j, g] : density) v += coefficient(j) * to_double(Rational(1, p + j));
  return v;
}

ResiduePolynomial res_qp_polynomial(const ClassicalSymbol& tau, int p, const ClassicalSymbol& a, int dim) {
  if (tau.is_zero()) {
    ResiduePolynomial zero;
    zero.dim = dim;
    zero.rho = residue_normalization(dim);
    return zero;
  }
  const Rational s = -tau.order();
  if (s <= 0) throw ContractViolation("tau must have negative order");
  const long j_max = std::max(0L, floor_to_long(Rational(dim) / s - p));
  const int q_max = static_cast<int>(j_max) + 2;
  const auto q_sym = qp_symbol(tau, p, a, q_max, Rational(-dim));

  ResiduePolynomial out;
  out.dim = dim;
  out.rho = residue_normalization(dim);
  for (int j = 1; j <= q_max; ++j) {
    GaussRational g = residue_density(q_sym[j], dim);
    if (j > j_max) {
      if (!g.is_zero())
        throw ContractViolation("residue of Q_" + std::to_string(p) + " has a nonzero t^" + std::to_string(j) +
                                " term beyond the floor bound");
      continue;
    }
    out.density.emplace(j, std::move(g));
  }
  return out;
}

}  // namespace detanomaly::symbol
