#pragma once

// Finite Fourier compressions and dense spectra.

#include "detanomaly/spectral_models.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace detanomaly {

/// (2N+1) x (2N+1) matrix indexed by Fourier modes -N..N: entry(p, q) is
/// <e_p, Op e_q> in the normalized exponential basis.
class DenseMatrix {
 public:
  explicit DenseMatrix(int N) : N_(N), entries_(Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1)) {}
  DenseMatrix(int N, Eigen::MatrixXcd entries);

  int truncation() const { return N_; }
  Eigen::Index size() const { return entries_.rows(); }
  std::complex<double>& entry(long p, long q) { return entries_(p + N_, q + N_); }
  const std::complex<double>& entry(long p, long q) const { return entries_(p + N_, q + N_); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }
  Eigen::MatrixXcd& matrix() { return entries_; }

 private:
  int N_;
  Eigen::MatrixXcd entries_;
};

/// Compression to modes |n| <= N. For the Product kind this is A_N (I + t T_N),
/// which equals the compression of A(I + tT) because A is diagonal.
DenseMatrix compress(const ModelOperator& op, int N);

/// All eigenvalues with multiplicity. Tridiagonal matrices with real diagonal
/// and real positive off-diagonal products are symmetrized and solved in
/// O(n^2); everything else goes through the general complex Schur solver.
std::vector<std::complex<double>> spectrum_dense(const Eigen::MatrixXcd& m);
std::vector<std::complex<double>> spectrum_dense(const DenseMatrix& m);

/// max_i ||M v_i - lambda_i v_i|| / ||M|| over a full eigendecomposition;
/// diagnostic for the accuracy contract.
double eigen_residual(const Eigen::MatrixXcd& m);

}  // namespace detanomaly
