// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "detanomaly/anomaly.hpp"
#include "detanomaly/fredholm.hpp"
#include "detanomaly/residue.hpp"
#include "detanomaly/special_functions.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace detanomaly;

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kGamma = boost::math::constants::euler<double>();

int failures = 0;

void report(const char* id, bool pass, const std::string& what, double seconds) {
  std::printf("%-4s %s  %s  (%.2f s)\n", id, pass ? "PASS" : "FAIL", what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

void criterion(const char* id, const std::function<std::pair<bool, std::string>()>& body, double time_limit = 1e9) {
  const auto start = std::chrono::steady_clock::now();
  std::pair<bool, std::string> r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > time_limit) {
    r.first = false;
    r.second += fmt("; runtime over %.0f s", time_limit);
  }
  report(id, r.first, r.second, secs);
}

ProblemConfig diagonal(Rational s, int m, Rational c = Rational(1, 10), int N = 1024) {
  ProblemConfig cfg;
  cfg.k = 2;
  cfg.s = s;
  cfg.c = c;
  cfg.m = m;
  cfg.N = N;
  return cfg;
}

// sum_{n > N} n^{-a} by Euler-Maclaurin
double power_tail(double a, double N) {
  return std::pow(N, 1 - a) / (a - 1) - 0.5 * std::pow(N, -a) + a * std::pow(N, -a - 1) / 12 -
         a * (a + 1) * (a + 2) * std::pow(N, -a - 3) / 720;
}

// sum_{n >= 1} of the tail sum_{r > r0} (-1)^{r-1} (c n^{-s})^r / r of log(1 + c n^{-s})
double log_tail_sum(double c, double s, int r0) {
  const int N = 2000;
  double head = 0;
  for (int n = N; n >= 1; --n) {
    const double x = c * std::pow(n, -s);
    double poly = 0;
    for (int r = r0; r >= 1; --r) poly += ((r % 2) ? 1.0 : -1.0) * std::pow(x, r) / r;
    head += std::log1p(x) - poly;
  }
  double tail = 0;
  for (int r = r0 + 1; r < r0 + 30; ++r) tail += ((r % 2) ? 1.0 : -1.0) * std::pow(c, r) / r * power_tail(r * s, N);
  return head + tail;
}

// Semi-analytic w for d = 1, k, s = 1/2, m = 3:
//   log det A(I+T) - log det A = 2 [c fp zeta(1/2) - c^2/2 fp zeta(1) + sum_n R_n] - c^2 / k
// with fp zeta(1) = gamma, R_n the O(n^{-3/2}) part of log(1 + c n^{-1/2}), and
//   log det_3(I+T) = 2 sum_n R_n.
double oracle_half_case(double c, double k) {
  const double fp_sum = c * boost::math::zeta(0.5) - c * c / 2 * kGamma + log_tail_sum(c, 0.5, 2);
  const double logdet_ratio = 2 * fp_sum - c * c / k;
  const double logdet3 = 2 * log_tail_sum(c, 0.5, 2);
  return logdet_ratio - logdet3;
}

}  // namespace

int main() {
  criterion("A1", [] {
    const ProblemConfig cfg = diagonal(Rational(1, 2), 3);
    const double oracle = oracle_half_case(0.1, 2.0);
    const double lhs = lhs_anomaly(cfg).w;
    const double rhs = rhs_theorem(cfg).w;
    const bool ok = std::abs(lhs - rhs) <= 1e-6 && std::abs(lhs - oracle) <= 1e-6;
    return std::pair{ok, fmt("w_lhs=%.12f w_rhs=%.12f oracle=%.12f", lhs, rhs, oracle) +
                             fmt(" |lhs-rhs|=%.2e |lhs-oracle|=%.2e tol 1e-6", std::abs(lhs - rhs), std::abs(lhs - oracle))};
  }, 60);

  criterion("A2", [] {
    const double w = lhs_anomaly(diagonal(2, 1)).w;
    return std::pair{std::abs(w) <= 1e-8, fmt("trace class s=2 m=1: |w|=%.2e tol 1e-8", std::abs(w))};
  }, 10);

  criterion("A3", [] {
    const ProblemConfig cfg = diagonal(2, 2);
    const double exact = 2 * 0.1 * boost::math::zeta(2.0);
    const double w = lhs_anomaly(cfg).w;
    const RhsParts rhs = rhs_theorem(cfg);
    bool residues_vanish = true;
    for (const auto& poly : rhs.residue_polynomials) residues_vanish = residues_vanish && poly.is_exactly_zero();
    const bool ok = std::abs(w - exact) <= 1e-8 && std::abs(rhs.w - exact) <= 1e-8 && residues_vanish;
    return std::pair{ok, fmt("m=2: w_lhs-2c zeta(2)=%.2e w_rhs-2c zeta(2)=%.2e tol 1e-8", w - exact, rhs.w - exact) +
                             (residues_vanish ? ", residue terms exactly 0" : ", residue terms nonzero")};
  });

  criterion("A4", [] {
    const CheckResult r = check_residue_relation(diagonal(Rational(1, 2), 3), {0.25, 0.5, 1.0});
    const double calibration = calibrate_residue_normalization();
    const bool ok = r.pass && r.max_error <= 1e-8 && std::abs(calibration - symbol::kResidueCalibration) <= 1e-10;
    return std::pair{ok, fmt("res Q_p(t) vs k res tr Phi_p(t): max error %.2e tol 1e-8; rho = %g (2 pi)^-d", r.max_error,
                             symbol::kResidueCalibration)};
  });

  criterion("A5", [] {
    bool ok = true;
    std::string what;
    for (int d : {1, 2}) {
      ProblemConfig cfg = diagonal(Rational(d, 2), 3, Rational(1, 10), d == 1 ? 1024 : 64);
      cfg.d = d;
      const double special = special_case_half(cfg);
      const double rhs = rhs_theorem(cfg).w;
      const double lhs = lhs_anomaly(cfg).w;
      ok = ok && std::abs(special - rhs) <= 1e-15 && std::abs(special - lhs) <= 1e-6;
      what += fmt("d=%g: |formula-rhs|=%.1e |formula-lhs|=%.2e; ", d, std::abs(special - rhs), std::abs(special - lhs));
    }
    return std::pair{ok, what + "tol 1e-6"};
  });

  criterion("A6", [] {
    int cases = 0;
    bool ok = true;
    const std::vector<Rational> ss{Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(3, 4), 1, Rational(3, 2), 2};
    for (int d : {1, 2})
      for (const Rational& s : ss)
        for (int p = 1; p <= 5; ++p)
          for (int family = 0; family < (d == 1 ? 2 : 1); ++family) {
            if (!(Rational(p + 1) * s > d)) continue;
            ProblemConfig cfg = diagonal(s, 10);
            cfg.d = d;
            if (family == 1) {
              cfg.family = ModelFamily::Multiplication;
              cfg.u_coeffs = {{-1, GaussRational{Rational(1, 10)}}, {0, GaussRational{Rational(1, 7)}},
                              {1, GaussRational{Rational(1, 10)}}};
            }
            const auto poly = symbol::res_qp_polynomial(symbol_of_t(cfg), p, symbol_of_a(cfg), d);
            ok = ok && poly.is_exactly_zero();
            ++cases;
          }
    return std::pair{ok, fmt("res Q_p exactly zero for all %g (d, s, p, family) with (p+1)s > d", cases)};
  });

  criterion("A7", [] {
    const ProblemConfig half = diagonal(Rational(1, 2), 3);
    ProblemConfig mult = diagonal(Rational(3, 4), 2);
    mult.family = ModelFamily::Multiplication;
    mult.u_coeffs = {{-1, GaussRational{Rational(1, 10)}}, {1, GaussRational{Rational(1, 10)}}};
    const CheckResult e23 = check_detm_variation(half, {0.1, 0.3, 0.5, 0.7, 0.9});
    const CheckResult e23m = check_detm_variation(mult, {0.1, 0.3, 0.5, 0.7, 0.9});
    const CheckResult e24 = check_anomaly_variation(half);
    const bool ok = e23.max_error <= 1e-6 && e23m.max_error <= 1e-6 && e24.max_error <= 1e-5;
    return std::pair{ok, fmt("d/dt log det_m: %.2e (diagonal) %.2e (multiplication) tol 1e-6; ", e23.max_error,
                             e23m.max_error) +
                             fmt("w'(t): %.2e tol 1e-5", e24.max_error)};
  });

  criterion("A8", [] {
    std::mt19937_64 rng(20240601);
    std::normal_distribution<double> g;
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 100;
      Eigen::MatrixXcd t(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(i, j) = {g(rng), g(rng)};
      t *= 0.6 / std::sqrt(2.0 * n);  // spectral radius about 0.6
      const int m = 1 + trial % 3;
      const double product = det_m_from_eigenvalues(spectrum_dense(t), m).log_value;
      const double trace = log_det_m_trace(t, m);
      worst = std::max(worst, std::abs(product - trace));
    }
    return std::pair{worst <= 1e-10, fmt("product vs trace form on 50 random 100x100: max %.2e tol 1e-10", worst)};
  });

  criterion("A9", [] {
    ProblemConfig cfg = diagonal(Rational(3, 4), 2, 0, 4096);
    cfg.family = ModelFamily::Multiplication;
    cfg.u_coeffs = {{-1, GaussRational{Rational(1, 10)}}, {1, GaussRational{Rational(1, 10)}}};
    const LhsParts lhs = lhs_anomaly(cfg);
    const RhsParts rhs = rhs_theorem(cfg);
    bool residues_vanish = true;
    for (const auto& poly : rhs.residue_polynomials) residues_vanish = residues_vanish && poly.is_exactly_zero();
    const double diff = std::abs(lhs.w - rhs.w);
    return std::pair{diff <= 1e-3 && residues_vanish,
                     fmt("u=0.2cos x, ladder to N=%g: w_lhs=%.3e w_rhs=%.3e", lhs.ladder.back(), lhs.w, rhs.w) +
                         fmt(" |diff|=%.2e tol 1e-3", diff)};
  }, 600);

  criterion("A10", [] {
    const double z2 = hurwitz_zeta(2.0) - kPi * kPi / 6;
    const double dz0 = riemann_zeta_laurent(0.0).derivative + 0.5 * std::log(2 * kPi);
    const ZetaLaurent at1 = riemann_zeta_laurent(1.0);
    const double res = at1.residue - 1, fp = at1.finite_part - kGamma;
    const bool ok = std::abs(z2) <= 1e-13 && std::abs(dz0) <= 1e-12 && std::abs(res) <= 1e-12 && std::abs(fp) <= 1e-12;
    return std::pair{ok, fmt("zeta(2): %.1e  zeta'(0): %.1e  ", z2, dz0) + fmt("Laurent at 1: res %.1e fp %.1e", res, fp)};
  });

  std::printf("%s\n", failures == 0 ? "all criteria pass" : (std::to_string(failures) + " criteria fail").c_str());
  return failures == 0 ? 0 : 1;
}
