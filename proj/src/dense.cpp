#include "detanomaly/dense.hpp"

#include "detanomaly/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace detanomaly {

DenseMatrix::DenseMatrix(int N, Eigen::MatrixXcd entries) : N_(N), entries_(std::move(entries)) {
  if (entries_.rows() != 2 * N + 1 || entries_.cols() != 2 * N + 1)
    throw ContractViolation("DenseMatrix: size does not match truncation");
}

namespace {

void fill(const ModelOperator& op, DenseMatrix& out) {
  const long N = out.truncation();
  switch (op.kind) {
    case OperatorKind::CirclePower:
    case OperatorKind::DiagonalPerturbation:
      for (long n = -N; n <= N; ++n) out.entry(n, n) = op.eigenvalue(n);
      return;
    case OperatorKind::MultiplicationPerturbation:
      for (const auto& [mode, coeff] : op.u) {
        for (long q = -N; q <= N; ++q) {
          const long p = q + mode;
          if (p < -N || p > N) continue;
          out.entry(p, q) += coeff * op.multiplier_weight(q);
        }
      }
      return;
    case OperatorKind::Product: {
      DenseMatrix t(static_cast<int>(N));
      fill(op.children.at(1), t);
      out.matrix() = op.coupling * t.matrix();
      out.matrix().diagonal().array() += 1.0;
      for (long p = -N; p <= N; ++p) out.matrix().row(p + N) *= op.children.at(0).eigenvalue(p);
      return;
    }
  }
}

bool symmetrizable_tridiagonal(const Eigen::MatrixXcd& m, Eigen::VectorXd& diag, Eigen::VectorXd& sub) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(i - j) > 1 && m(i, j) != 0.0) return false;
  diag.resize(n);
  sub.resize(n > 0 ? n - 1 : 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (m(i, i).imag() != 0.0) return false;
    diag(i) = m(i, i).real();
  }
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const std::complex<double> prod = m(i, i + 1) * m(i + 1, i);
    const double scale = std::abs(m(i, i + 1)) * std::abs(m(i + 1, i));
    if (std::abs(prod.imag()) > 1e-14 * scale || prod.real() < 0.0) return false;
    sub(i) = std::sqrt(prod.real());
  }
  return true;
}

}  // namespace

DenseMatrix compress(const ModelOperator& op, int N) {
  if (N < 0) throw ContractViolation("compress: negative truncation");
  if (op.dim != 1) throw UnsupportedOperation("dense compression is implemented on S^1 only");
  DenseMatrix out(N);
  fill(op, out);
  return out;
}

std::vector<std::complex<double>> spectrum_dense(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw ContractViolation("spectrum_dense: matrix not square");
  if (!m.allFinite()) throw ComputationError("spectrum_dense: non-finite entries");
  std::vector<std::complex<double>> out;
  if (m.rows() == 0) return out;
  out.reserve(m.rows());

  Eigen::VectorXd diag, sub;
  if (symmetrizable_tridiagonal(m, diag, sub)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ComputationError("tridiagonal eigensolver did not converge");
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.emplace_back(solver.eigenvalues()(i), 0.0);
    return out;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) throw ComputationError("complex eigensolver did not converge");
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

std::vector<std::complex<double>> spectrum_dense(const DenseMatrix& m) { return spectrum_dense(m.matrix()); }

double eigen_residual(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, true);
  if (solver.info() != Eigen::Success) throw ComputationError("complex eigensolver did not converge");
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::VectorXcd v = solver.eigenvectors().col(i);
    const double r = (m * v - solver.eigenvalues()(i) * v).norm() / v.norm();
    worst = std::max(worst, r / norm);
  }
  return worst;
}

}  // namespace detanomaly
