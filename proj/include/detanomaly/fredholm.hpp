#pragma once

// Regularized Fredholm determinants det_m(I + T).

#include "detanomaly/dense.hpp"
#include "detanomaly/spectral_models.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace detanomaly {

struct DetmValue {
  double log_value{0};  // real part of log det_m
  double phase{0};      // imaginary part (principal branches, summed)
  int m{1};
  int truncation{0};
  double tail_bound{0};  // estimate of the omitted modes; never added to log_value
};

/// log((1 + x) exp(sum_{p<m} (-1)^p x^p / p)) on the principal branch.
std::complex<double> log_det_m_factor(std::complex<double> x, int m);

/// sum_j log_det_m_factor(lambda_j, m), pairwise summed. Throws
/// ComputationError if some 1 + lambda_j vanishes or lies on the cut.
DetmValue det_m_from_eigenvalues(const std::vector<std::complex<double>>& lambdas, int m);

/// tr log(I + T) through the eigenvalues plus sum_{p<m} (-1)^p tr(T^p) / p
/// from matrix powers.
double log_det_m_trace(const Eigen::MatrixXcd& t, int m);
double log_det_m_trace(const DenseMatrix& t, int m);

/// (-1)^{m-1} t^{m-1} tr[T^m (I + tT)^{-1}] on a matrix.
double dt_log_det_m(const Eigen::MatrixXcd& t_matrix, double t, int m);
/// Same on the N-compression of a perturbation.
double dt_log_det_m(const ModelOperator& t_op, double t, int m, int N);

/// 2 sum_{n > N} |t_n|^m for |t_n| <= amplitude n^{-s} on S^1 (lattice
/// count on T^2), times the safety factor 2.
double det_m_tail_bound(double amplitude, double decay, int m, int N, int dim = 1);

/// det_m(I + tT) for a perturbation operator truncated at N: exact
/// eigenvalues for diagonal kinds, the dense spectrum otherwise.
DetmValue det_m_model(const ModelOperator& t_op, double t, int m, int N);

/// sup |u| bound sum |u_m| for a multiplication perturbation, |c| otherwise.
double perturbation_amplitude(const ModelOperator& t_op);

}  // namespace detanomaly
