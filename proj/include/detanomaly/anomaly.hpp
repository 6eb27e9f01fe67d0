#pragma once

// Both sides of the anomaly formula
//
//   w_m(A, T) = log det A(I+T) - log det A - log det_m(I+T)
//             = sum_{p<m} (-1)^{p-1}/p fp tr(T^p A^z)
//               + 1/k sum_{p<m} (-1)^{p-1} int_0^1 t^{p-1} res Q_p(t) dt
//
// computed through independent pipelines, plus the subsidiary identities
// that tie them together.

#include "detanomaly/residue.hpp"
#include "detanomaly/spectral_models.hpp"

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace detanomaly {

/// Dense spectrum provider: eigenvalues of compress(op, N).
using SpectrumProvider = std::function<std::vector<std::complex<double>>(const ModelOperator&, int)>;

SpectrumProvider default_spectrum_provider();

struct HarnessOptions {
  SpectrumProvider spectrum = default_spectrum_provider();
  bool subsidiary_checks{true};
};

struct Estimate {
  double value{0};
  double uncertainty{0};
};

struct LhsParts {
  Estimate logdet_product;
  Estimate logdet_a;
  Estimate logdetm;
  double w{0};
  std::vector<int> ladder;
  std::vector<double> ladder_exponents;
  std::vector<double> w_ladder;  // raw w at each ladder level
};

struct RhsParts {
  std::vector<double> fp_terms;       // (-1)^{p-1}/p fp tr(T^p A^z)
  std::vector<double> fp_residues;    // residues of tr(T^p A^z), for the record
  std::vector<double> residue_terms;  // 1/k (-1)^{p-1} int t^{p-1} res Q_p
  std::vector<symbol::ResiduePolynomial> residue_polynomials;
  double w{0};
};

struct CheckResult {
  std::string name;
  bool applicable{true};
  bool pass{false};
  double max_error{0};
  double tolerance{0};
  std::string detail;
};

struct AnomalyReport {
  ProblemConfig config;
  std::optional<LhsParts> lhs;
  std::optional<RhsParts> rhs;
  std::vector<CheckResult> checks;
  std::optional<double> special_case;  // s = d/2 closed formula
  double discrepancy{0};
  double tolerance{0};
  bool pass{false};
  double rho{0};
  std::string failed_stage;  // empty when every stage ran
  std::string error;
  std::map<std::string, double> timing;  // seconds per stage

  bool subsidiary_pass() const;
};

/// validate() plus the harness restriction 2s > d for non-diagonal models
/// (the dense left side needs T Hilbert-Schmidt).
void validate_for_harness(const ProblemConfig& cfg);

/// Truncation ladder {N/4, N/2, N} and the exponents alpha of the
/// corrections c N^{-alpha} removed by Richardson extrapolation.
std::vector<int> truncation_ladder(const ProblemConfig& cfg);
std::vector<double> ladder_exponents(const ProblemConfig& cfg);

/// Extrapolates values[i] at ns[i] assuming v(N) = v + sum_j c_j N^{-alpha_j}
/// (uses as many exponents as there are extra points).
Estimate richardson(const std::vector<double>& values, const std::vector<int>& ns, const std::vector<double>& alphas);

/// w(t) = log det A(I + tT) - log det A - log det_m(I + tT) at truncation N.
struct LhsSample {
  double logdet_product;
  double logdet_a;
  double logdetm;
  double w() const { return logdet_product - logdet_a - logdetm; }
};
LhsSample lhs_sample(const ProblemConfig& cfg, double coupling, int N, const HarnessOptions& opts = {});

LhsParts lhs_anomaly(const ProblemConfig& cfg, const HarnessOptions& opts = {});
LhsParts lhs_anomaly(const ProblemConfig& cfg, double coupling, const HarnessOptions& opts = {});

RhsParts rhs_theorem(const ProblemConfig& cfg);

/// Closed formula for s = d/2 (m = 3):
///   fp tr(T A^z) - 1/2 fp tr(T^2 A^z) + 1/(2k) rho int tau_{-d/2}^2 mu.
/// Throws ConfigError unless s = d/2 and m = 3.
double special_case_half(const ProblemConfig& cfg);
/// Exact cosphere density of tau_{-d/2}^2.
GaussRational special_case_half_density(const ProblemConfig& cfg);

/// res Q_p(t) from the symbol engine against k * res_{z=0} tr Phi_p(t, z)
/// from the spectral side, for p = 1..m-1 (diagonal models).
CheckResult check_residue_relation(const ProblemConfig& cfg, const std::vector<double>& ts = {0.25, 0.5, 1.0});

/// d/dt log det_m(I + tT) against a centered difference on a t-grid.
CheckResult check_detm_variation(const ProblemConfig& cfg, const std::vector<double>& ts = {0.1, 0.3, 0.5, 0.7, 0.9});

/// w'(t) by differences against sum_p (-1)^{p-1} t^{p-1} fp tr[T^p (A(I+tT))^z]
/// (diagonal models).
CheckResult check_anomaly_variation(const ProblemConfig& cfg, const std::vector<double>& ts = {0.25, 0.5, 0.75});

/// Ratio between the spectral residue of tr Phi_1(1, z) and the symbol
/// residue computed with the base normalization (2 pi)^{-d}, on the diagonal
/// model d = 1, k = 2, s = 1/2, c = 1/10.
double calibrate_residue_normalization();

AnomalyReport verify(const ProblemConfig& cfg, const HarnessOptions& opts = {});

}  // namespace detanomaly
