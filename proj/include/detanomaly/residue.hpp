#pragma once

// Guillemin–Wodzicki residue of classical symbols and the residue polynomial
// t -> res Q_p(t).

#include "detanomaly/exact.hpp"
#include "detanomaly/symbol.hpp"

#include <map>

namespace detanomaly::symbol {

/// Base normalization (2 pi)^{-d} of the cosphere integral.
double base_residue_normalization(int dim);

/// Global calibration factor applied to the base normalization. Fixed once by
/// matching the symbol residue against the exact residue of the spectral
/// trace on diagonal models (see anomaly::calibrate_residue_normalization);
/// the spectral side uses tr(Q A^z) rather than tr(Q A^{-z}), which flips the
/// sign.
inline constexpr double kResidueCalibration = -1.0;

/// rho = kResidueCalibration * (2 pi)^{-d}.
double residue_normalization(int dim);

/// Exact cosphere density of the degree -dim component: on S^1 the sum over
/// both rays of the x-mean; on T^2 (x-independent, isotropic symbols only) the
/// mean on one ray. Multiply by residue_measure(dim) * rho for the residue.
GaussRational residue_density(const ClassicalSymbol& sym, int dim = 1);

/// Volume factor of the cosphere integral: 2 pi on S*S^1 (per unit density,
/// rays already summed), (2 pi)^2 * 2 pi on S*T^2.
double residue_measure(int dim);

/// res = rho * measure * density; zero when no degree -dim component exists.
double wodzicki_residue(const ClassicalSymbol& sym, int dim = 1);

/// res Q_p(t) = sum_j coefficient_j t^j.
struct ResiduePolynomial {
  int dim{1};
  std::map<int, GaussRational> density;  // exact cosphere densities, by power of t
  double rho{0};

  bool is_exactly_zero() const;
  double coefficient(int j) const;
  double evaluate(double t) const;
  /// int_0^1 t^{p-1} res Q_p(t) dt = sum_j coefficient_j / (p + j).
  double integrate_against_power(int p) const;
};

/// Residue polynomial of Q_p for the symbols tau (order -s) and a (order k).
/// Powers j up to floor(dim/s - p) are evaluated; all higher powers are
/// computed and checked to vanish exactly (ContractViolation otherwise).
ResiduePolynomial res_qp_polynomial(const ClassicalSymbol& tau, int p, const ClassicalSymbol& a, int dim = 1);

}  // namespace detanomaly::symbol
