#pragma once

// Laurent data at z = 0 of spectral sums  F(z) = sum_n d_n lambda_n^z.
//
// The index set is split into a finite head and branches indexed by
// j = 1, 2, ... On each branch lambda_j = C j^kappa exp(l_j), and d_j, l_j,
// l_j^2 admit expansions in powers j^{-eta}. Subtracting the expansions
// leaves remainders that are summed directly (with Richardson extrapolation
// in the cutoff); the subtracted pieces resum to zeta values
//   sum_j j^{-eta + kappa z} = D(eta - kappa z)
// with D = zeta_R on S^1 (one branch per sign of n) and D = 4 zeta beta on T^2
// (one branch indexed by |n|^2, multiplicity r_2(j)).

#include "detanomaly/special_functions.hpp"
#include "detanomaly/spectral_models.hpp"

#include <complex>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace detanomaly {

/// a_n ~ sum_r coefficient_r n^{-exponent_r}, valid for n >= n0; the first
/// omitted term is O(n^{-remainder_order}).
struct AsymptoticExpansion {
  struct Term {
    std::complex<double> coefficient;
    double exponent;
  };
  std::vector<Term> terms;
  double remainder_order{std::numeric_limits<double>::infinity()};
  long n0{1};

  bool empty() const { return terms.empty(); }
  /// Throws ContractViolation unless exponents are strictly increasing and
  /// below remainder_order.
  void check() const;
  std::complex<double> evaluate(double n) const;
};

struct ComplexLaurent {
  std::complex<double> residue{0};
  std::complex<double> finite_part{0};
  std::complex<double> derivative{0};

  ComplexLaurent& operator+=(const ComplexLaurent& o) {
    residue += o.residue;
    finite_part += o.finite_part;
    derivative += o.derivative;
    return *this;
  }
  ZetaLaurent real() const { return {residue.real(), finite_part.real(), derivative.real()}; }
};

enum class DirichletBase { Integers, SquareLattice };

/// Laurent data at s0 of D(s) for the given base.
ZetaLaurent dirichlet_base_laurent(DirichletBase base, double s0);

struct SpectralBranch {
  DirichletBase base{DirichletBase::Integers};
  std::vector<std::complex<double>> eigenvalues;  // element j-1 holds lambda_j
  std::vector<std::complex<double>> weights;      // d_j; empty means d_j = 1
  AsymptoticExpansion eigenvalue_expansion;       // leading term C j^kappa
  AsymptoticExpansion weight_expansion;           // used only when weights are given
};

struct SpectralSum {
  std::vector<std::pair<std::complex<double>, std::complex<double>>> head;  // (d, lambda)
  std::vector<SpectralBranch> branches;
  /// Richardson extrapolation of remainder sums over J/4, J/2, J.
  bool extrapolate{true};
  /// Numerical decay check of the remainders on the last two dyadic blocks.
  bool check_summability{true};
};

/// Laurent data at z = 0 of the continued sum. Throws ComputationError for an
/// eigenvalue on the cut (-inf, 0] or a remainder that is not summable.
ComplexLaurent spectral_laurent(const SpectralSum& sum);

/// Single branch over n = 1, 2, ... with base zeta_R. An empty expansion
/// means a finite list: residue 0, finite part = count, derivative = sum log.
ZetaLaurent zeta_laurent_general(const std::vector<std::complex<double>>& eigenvalues,
                                 const AsymptoticExpansion& expansion);

/// Eigenvalue asymptotics of a diagonal operator in the branch index j
/// (j = |n| on S^1, j = |n|^2 on T^2).
AsymptoticExpansion eigenvalue_expansion(const ModelOperator& op);

/// Continuation data for sum lambda_n^z over the spectrum of op truncated at
/// N. Diagonal operators use exact eigenvalues; a Product with a
/// multiplication perturbation uses the dense spectrum of the compression.
SpectralSum spectral_sum(const ModelOperator& op, int N);
/// Dense path with a precomputed spectrum of compress(op, N).
SpectralSum spectral_sum(const ModelOperator& op, int N, std::vector<std::complex<double>> dense_spectrum);

/// log det_zeta(op) = d/dz sum lambda_n^z at z = 0.
double log_det_zeta(const ModelOperator& op, int N);
/// Same, with the eigenvalue list (branch index n = 1, 2, ...) and its
/// asymptotics supplied explicitly.
double log_det_zeta(const std::vector<std::complex<double>>& eigenvalues, const AsymptoticExpansion& expansion);

/// (T^p)_{nn} of a diagonal or multiplication perturbation.
std::complex<double> power_diagonal_entry(const ModelOperator& t, int p, long n);

/// Expansion of (T^p)_{nn} in j = |n| on the branch sign(n) = sign.
AsymptoticExpansion power_diagonal_expansion(const ModelOperator& t, int p, int sign);

/// Laurent data at z = 0 of tr(T^p A^z). N is the length of the directly
/// summed remainder on the general path.
ZetaLaurent fp_trace_power(const ModelOperator& t, int p, const ModelOperator& a, int N = 2048);

/// Laurent data at z = 0 of tr(T^p (A(I + tT))^z) for diagonal models.
ZetaLaurent fp_trace_power_perturbed(const ModelOperator& t, int p, const ModelOperator& a, double coupling,
                                     int N = 2048);

/// Richardson limit of S(J) = S + a J^{-alpha1} + b J^{-alpha2} from the
/// values at J/4, J/2, J.
std::complex<double> richardson3(const std::complex<double> s[3], double j_max, double alpha1, double alpha2);

}  // namespace detanomaly
