#pragma once

// Model operators on S^1 (and diagonal models on T^2):
//
//   A = |D|^k + P                 eigenvalue 1 at n = 0, |n|^k otherwise
//   T = c |D|^{-s} (1 - P)        DiagonalPerturbation
//   T = M_u o (|D| + P)^{-s}      MultiplicationPerturbation (multiplier on the right)
//   A (I + t T)                   Product
//
// P is the projection onto constants; it only enters through the spectral
// maps and is invisible to the symbols.

#include "detanomaly/exact.hpp"
#include "detanomaly/symbol.hpp"

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace detanomaly {

enum class ModelFamily { Diagonal, Multiplication };

struct ProblemConfig {
  std::string name;
  ModelFamily family{ModelFamily::Diagonal};
  int d{1};
  Rational k{2};
  Rational s{1};
  int m{1};
  Rational c{0};
  /// Fourier coefficients of u (MultiplicationPerturbation); u must be real.
  std::map<int, GaussRational> u_coeffs;
  int N{1024};
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& key, double fallback) const;
};

/// Throws ConfigError naming the field on any violated invariant.
void validate(const ProblemConfig& cfg);

enum class OperatorKind { CirclePower, DiagonalPerturbation, MultiplicationPerturbation, Product };

std::string to_string(OperatorKind kind);

struct ModelOperator {
  OperatorKind kind{OperatorKind::CirclePower};
  int dim{1};
  double order{0};
  double power{2};      // k (CirclePower)
  double decay{1};      // s (perturbations)
  double amplitude{0};  // c (DiagonalPerturbation)
  double coupling{1};   // t in A(I + tT) (Product)
  std::map<int, std::complex<double>> u;  // MultiplicationPerturbation
  std::optional<symbol::ClassicalSymbol> symbol;
  double cut_ray{3.14159265358979323846};  // arg of the spectral cut
  std::vector<ModelOperator> children;     // Product: {A, T}

  bool is_diagonal() const;
  /// Eigenvalue at mode n (d = 1) for diagonal kinds.
  double eigenvalue(long n) const;
  /// Eigenvalue at lattice point (n1, n2) for diagonal kinds on T^2.
  double eigenvalue(long n1, long n2) const;
  /// Eigenvalue of a diagonal kind as a function of |n| > 0.
  double eigenvalue_at_radius(double r) const;
  /// Multiplier value w(q) = (|q| + P)^{-s} of the MultiplicationPerturbation.
  double multiplier_weight(long q) const;
};

/// Degree cutoff used for attached symbols.
inline const Rational kSymbolCutoff(-8);

/// Builds A (CirclePower), T (either perturbation kind, matching cfg.family)
/// or A(I + T) (Product).
ModelOperator make_operator(const ProblemConfig& cfg, OperatorKind kind);

/// A(I + tT).
ModelOperator make_product(const ModelOperator& a, const ModelOperator& t, double coupling);

/// The symbols attached to A and T for d = 1.
symbol::ClassicalSymbol symbol_of_a(const ProblemConfig& cfg);
symbol::ClassicalSymbol symbol_of_t(const ProblemConfig& cfg);

/// Modes |n| <= N in the order 0, 1, -1, 2, -2, ... (d = 1), or lattice points
/// with |n|^2 <= N^2 ordered by |n|^2 then lexicographically (d = 2).
std::vector<double> diagonal_eigenvalues(const ModelOperator& op, int N);

/// Mode index order used by diagonal_eigenvalues for d = 1.
std::vector<long> circle_mode_order(int N);

}  // namespace detanomaly
