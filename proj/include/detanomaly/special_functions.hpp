#pragma once

// Hurwitz/Riemann zeta and Dirichlet beta through Euler–Maclaurin summation,
// with Laurent data at the pole. Everything downstream that continues a
// spectral sum reduces to these Dirichlet series.

#include <complex>

namespace detanomaly {

/// Second-order Taylor jet f(s0 + e) = value + d1*e + d2*e^2/2.
struct Jet {
  double value{0};
  double d1{0};
  double d2{0};
};

/// Laurent data at a point: residue/e + finite_part + derivative*e + O(e^2).
struct ZetaLaurent {
  double residue{0};
  double finite_part{0};
  double derivative{0};
};

/// Hurwitz zeta(s, a), a > 0, real s != 1.
double hurwitz_zeta(double s, double a = 1.0);

/// Hurwitz zeta at complex s != 1.
std::complex<double> hurwitz_zeta(std::complex<double> s, double a = 1.0);

/// Jet of zeta(s, a) at s0; at s0 == 1 the jet of the regular part
/// zeta(s, a) - 1/(s - 1) is returned instead.
Jet hurwitz_jet(double s0, double a = 1.0);

/// Laurent data of the Riemann zeta function at s0 (pole only at s0 = 1).
ZetaLaurent riemann_zeta_laurent(double s0);

/// Jet of the Dirichlet beta function beta(s) = sum (-1)^n (2n+1)^-s.
Jet dirichlet_beta_jet(double s0);

/// Laurent data at s0 of the square-lattice Dirichlet series
/// sum_{n in Z^2 \ 0} |n|^{-2s} = 4 zeta(s) beta(s).
ZetaLaurent square_lattice_zeta_laurent(double s0);

/// Euler–Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

}  // namespace detanomaly
