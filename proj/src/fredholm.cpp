#include "detanomaly/fredholm.hpp"

#include "detanomaly/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace detanomaly {

namespace {

using cx = std::complex<double>;

cx pairwise_sum(const std::vector<cx>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 16) {
    cx s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace

std::complex<double> log_det_m_factor(std::complex<double> x, int m) {
  if (m < 1) throw ContractViolation("det_m needs m >= 1");
  const cx one_plus = 1.0 + x;
  if (std::abs(one_plus) < 1e-14) throw ComputationError("singular determinant: eigenvalue -1");
  if (one_plus.imag() == 0.0 && one_plus.real() < 0.0)
    throw ComputationError("1 + lambda on the negative axis: no principal logarithm");
  if (std::abs(x) < 0.1) {
    // sum_{p >= m} (-1)^{p-1} x^p / p
    cx sum = 0, xp = std::pow(x, m);
    for (int p = m; p < m + 60; ++p) {
      const cx term = xp / static_cast<double>(p);
      sum += (p % 2 == 1) ? term : -term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      xp *= x;
    }
    return sum;
  }
  cx sum = std::log(one_plus), xp = 1.0;
  for (int p = 1; p < m; ++p) {
    xp *= x;
    sum += ((p % 2 == 0) ? 1.0 : -1.0) * xp / static_cast<double>(p);
  }
  return sum;
}

DetmValue det_m_from_eigenvalues(const std::vector<std::complex<double>>& lambdas, int m) {
  std::vector<cx> terms;
  terms.reserve(lambdas.size());
  for (cx l : lambdas) terms.push_back(log_det_m_factor(l, m));
  const cx total = terms.empty() ? cx(0) : pairwise_sum(terms, 0, terms.size());
  DetmValue out;
  out.log_value = total.real();
  out.phase = total.imag();
  out.m = m;
  return out;
}

double log_det_m_trace(const Eigen::MatrixXcd& t, int m) {
  if (m < 1) throw ContractViolation("det_m needs m >= 1");
  const auto eigs = spectrum_dense(t);
  std::vector<cx> logs;
  for (cx l : eigs) {
    if (std::abs(1.0 + l) < 1e-14) throw ComputationError("singular determinant: eigenvalue -1");
    logs.push_back(std::log(1.0 + l));
  }
  cx total = logs.empty() ? cx(0) : pairwise_sum(logs, 0, logs.size());
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(t.rows(), t.cols());
  for (int p = 1; p < m; ++p) {
    power = power * t;
    total += ((p % 2 == 0) ? 1.0 : -1.0) * power.trace() / static_cast<double>(p);
  }
  return total.real();
}

double log_det_m_trace(const DenseMatrix& t, int m) { return log_det_m_trace(t.matrix(), m); }

double dt_log_det_m(const Eigen::MatrixXcd& t_matrix, double t, int m) {
  if (m < 1) throw ContractViolation("det_m needs m >= 1");
  if (m >= 2 && t == 0.0) return 0.0;
  const Eigen::Index n = t_matrix.rows();
  Eigen::MatrixXcd tm = t_matrix;
  for (int p = 1; p < m; ++p) tm = tm * t_matrix;
  const Eigen::MatrixXcd shifted = Eigen::MatrixXcd::Identity(n, n) + t * t_matrix;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
  if (!(std::abs(lu.determinant()) > 0.0)) throw ComputationError("I + tT is singular");
  const cx tr = lu.solve(tm).trace();
  const double sign = (m % 2 == 1) ? 1.0 : -1.0;
  return sign * std::pow(t, m - 1) * tr.real();
}

double dt_log_det_m(const ModelOperator& t_op, double t, int m, int N) {
  return dt_log_det_m(compress(t_op, N).matrix(), t, m);
}

double det_m_tail_bound(double amplitude, double decay, int m, int N, int dim) {
  const double ms = m * decay;
  if (!(ms > dim)) return std::numeric_limits<double>::infinity();
  constexpr double kSafety = 2.0;
  const double a = std::pow(std::abs(amplitude), m);
  if (dim == 1) return kSafety * 2.0 * a * std::pow(static_cast<double>(N), 1.0 - ms) / (ms - 1.0);
  // lattice points with |n| > N: 2 pi r dr
  return kSafety * 2.0 * std::numbers::pi * a * std::pow(static_cast<double>(N), 2.0 - ms) / (ms - 2.0);
}

double perturbation_amplitude(const ModelOperator& t_op) {
  if (t_op.kind == OperatorKind::DiagonalPerturbation) return std::abs(t_op.amplitude);
  double sum = 0;
  for (const auto& [mode, c] : t_op.u) sum += std::abs(c);
  return sum;
}

DetmValue det_m_model(const ModelOperator& t_op, double t, int m, int N) {
  std::vector<cx> lambdas;
  if (t_op.is_diagonal() && t_op.dim == 1) {
    for (long n : circle_mode_order(N)) lambdas.emplace_back(t * t_op.eigenvalue(n));
  } else if (t_op.is_diagonal()) {
    for (long a = -N; a <= N; ++a)
      for (long b = -N; b <= N; ++b)
        if (a * a + b * b <= static_cast<long>(N) * N) lambdas.emplace_back(t * t_op.eigenvalue(a, b));
  } else {
    for (cx l : spectrum_dense(compress(t_op, N))) lambdas.push_back(t * l);
  }
  DetmValue out = det_m_from_eigenvalues(lambdas, m);
  out.truncation = N;
  out.tail_bound = det_m_tail_bound(std::abs(t) * perturbation_amplitude(t_op), t_op.decay, m, N, t_op.dim);
  return out;
}

}  // namespace detanomaly
