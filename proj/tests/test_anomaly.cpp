#include "detanomaly/anomaly.hpp"
#include "detanomaly/errors.hpp"
#include "detanomaly/special_functions.hpp"

#include <doctest.h>

#include <cmath>

using namespace detanomaly;

namespace {

ProblemConfig diagonal_cfg(Rational s, int m, int N = 1024) {
  ProblemConfig cfg;
  cfg.k = 2;
  cfg.s = s;
  cfg.c = Rational(1, 10);
  cfg.m = m;
  cfg.N = N;
  return cfg;
}

ProblemConfig multiplication_cfg(Rational mean, int N) {
  ProblemConfig cfg;
  cfg.family = ModelFamily::Multiplication;
  cfg.k = 2;
  cfg.s = Rational(3, 4);
  cfg.m = 2;
  cfg.N = N;
  cfg.u_coeffs = {{-1, GaussRational{Rational(1, 10)}}, {1, GaussRational{Rational(1, 10)}}};
  if (!mean.is_zero()) cfg.u_coeffs[0] = GaussRational{mean};
  return cfg;
}

}  // namespace

TEST_CASE("richardson removes known corrections") {
  const std::vector<int> ns{64, 128, 256};
  std::vector<double> v;
  for (int n : ns) v.push_back(1.5 + 0.3 / n - 2.0 * std::pow(n, -2.5));
  const Estimate e = richardson(v, ns, {1.0, 2.5});
  CHECK(e.value == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(richardson({2.0}, {10}, {}).value == 2.0);
  CHECK_THROWS_AS(richardson({1.0, 2.0}, {10}, {1.0}), ContractViolation);

  CHECK(truncation_ladder(diagonal_cfg(Rational(1, 2), 3)) == std::vector<int>{256, 512, 1024});
  CHECK(truncation_ladder(diagonal_cfg(Rational(1, 2), 3, 2)) == std::vector<int>{2});
}

TEST_CASE("zero perturbation has no anomaly") {
  ProblemConfig cfg = diagonal_cfg(Rational(1, 2), 3, 256);
  cfg.c = 0;
  const AnomalyReport rep = verify(cfg);
  REQUIRE(rep.failed_stage.empty());
  CHECK(rep.lhs->w == 0.0);
  CHECK(rep.rhs->w == 0.0);
  CHECK(rep.pass);
}

TEST_CASE("trace class perturbation") {
  const ProblemConfig m1 = diagonal_cfg(2, 1);
  CHECK(std::abs(lhs_anomaly(m1).w) <= 1e-8);
  CHECK(rhs_theorem(m1).w == 0.0);

  const double trace = 2 * 0.1 * hurwitz_zeta(2.0);
  const double trace2 = 2 * 0.01 * hurwitz_zeta(4.0);
  const double w2 = lhs_anomaly(diagonal_cfg(2, 2)).w;
  const double w3 = lhs_anomaly(diagonal_cfg(2, 3)).w;
  CHECK(w2 == doctest::Approx(trace).epsilon(1e-8));
  CHECK(rhs_theorem(diagonal_cfg(2, 2)).w == doctest::Approx(trace).epsilon(1e-12));
  CHECK(w3 - w2 == doctest::Approx(-trace2 / 2).epsilon(1e-8));
}

TEST_CASE("half case: both sides and the closed formula") {
  const ProblemConfig cfg = diagonal_cfg(Rational(1, 2), 3);
  const AnomalyReport rep = verify(cfg);
  REQUIRE(rep.failed_stage.empty());
  CHECK(rep.discrepancy <= 1e-6);
  CHECK(rep.pass);
  CHECK(rep.subsidiary_pass());
  REQUIRE(rep.special_case.has_value());
  CHECK(*rep.special_case == doctest::Approx(rep.rhs->w).epsilon(1e-14));
  CHECK(rep.rhs->fp_terms.size() == 2);
  // tau^2 = c^2 |xi|^{-1} on both rays
  CHECK(special_case_half_density(cfg) == GaussRational{Rational(2, 100)});
  CHECK_THROWS_AS(special_case_half(diagonal_cfg(Rational(1, 3), 4)), ConfigError);
}

TEST_CASE("s = 1/3 needs three subtracted powers") {
  const AnomalyReport rep = verify(diagonal_cfg(Rational(1, 3), 4));
  REQUIRE(rep.failed_stage.empty());
  CHECK(rep.discrepancy <= 1e-6);
  CHECK(rep.subsidiary_pass());
  CHECK(rep.rhs->residue_terms.size() == 3);
}

TEST_CASE("normalization calibrates to -1") { CHECK(calibrate_residue_normalization() == doctest::Approx(-1.0).epsilon(1e-10)); }

TEST_CASE("torus") {
  ProblemConfig cfg = diagonal_cfg(1, 3, 64);
  cfg.d = 2;
  const AnomalyReport rep = verify(cfg);
  REQUIRE(rep.failed_stage.empty());
  CHECK(rep.discrepancy <= 1e-6);
  CHECK(rep.subsidiary_pass());
}

TEST_CASE("multiplication perturbation") {
  // mean 1/10: w = u_0 (1 + 2 zeta(3/4))
  const AnomalyReport rep = verify(multiplication_cfg(Rational(1, 10), 256));
  REQUIRE(rep.failed_stage.empty());
  CHECK(rep.rhs->w == doctest::Approx(0.1 * (1 + 2 * hurwitz_zeta(0.75))).epsilon(1e-12));
  CHECK(std::abs(rep.lhs->w - rep.rhs->w) <= 1e-6);

  const AnomalyReport zero_mean = verify(multiplication_cfg(0, 256));
  REQUIRE(zero_mean.failed_stage.empty());
  CHECK(zero_mean.rhs->w == 0.0);
  CHECK(std::abs(zero_mean.lhs->w) <= 1e-6);
  for (const auto& c : zero_mean.checks)
    if (c.name == "eq23") CHECK(c.pass);
}

TEST_CASE("stage errors are captured") {
  ProblemConfig cfg = diagonal_cfg(2, 2, 64);
  cfg.c = -1;  // 1 + t_{+-1} = 0
  const AnomalyReport rep = verify(cfg);
  CHECK(rep.failed_stage == "lhs");
  CHECK_FALSE(rep.error.empty());
  CHECK_FALSE(rep.pass);

  ProblemConfig bad = diagonal_cfg(Rational(1, 2), 2);
  const AnomalyReport invalid = verify(bad);
  CHECK(invalid.failed_stage == "validate");
}
