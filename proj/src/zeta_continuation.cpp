#include "detanomaly/zeta_continuation.hpp"

#include "detanomaly/dense.hpp"
#include "detanomaly/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

namespace detanomaly {

namespace {

using cx = std::complex<double>;

// Exponents beyond this are left in the remainder.
constexpr double kMaxExponent = 14.0;
constexpr double kExponentTol = 1e-9;

// Generalized power series sum c_e j^{-e}, exact below cap.
class Series {
 public:
  explicit Series(double cap) : cap_(cap) {}

  double cap() const { return cap_; }
  const std::map<double, cx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  double min_exponent() const { return terms_.empty() ? cap_ : terms_.begin()->first; }

  void add(double e, cx c) {
    if (e >= cap_ - kExponentTol) return;
    auto it = terms_.lower_bound(e - kExponentTol);
    if (it != terms_.end() && std::abs(it->first - e) < kExponentTol)
      it->second += c;
    else
      terms_.emplace(e, c);
  }

  cx evaluate(double j) const {
    cx sum = 0;
    for (const auto& [e, c] : terms_) sum += c * std::pow(j, -e);
    return sum;
  }

  friend Series multiply(const Series& a, const Series& b, double cap) {
    Series out(cap);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.add(ea + eb, ca * cb);
    return out;
  }

  // log(1 + x) for x with positive exponents only.
  friend Series log1p(const Series& x) {
    Series out(x.cap_);
    if (x.empty()) return out;
    if (x.min_exponent() <= 0) throw ContractViolation("log1p of a series that does not decay");
    Series power = x;
    for (int r = 1; !power.empty(); ++r) {
      const double sign = (r % 2 == 1) ? 1.0 : -1.0;
      for (const auto& [e, c] : power.terms_) out.add(e, sign * c / static_cast<double>(r));
      power = multiply(power, x, x.cap_);
    }
    return out;
  }

 private:
  double cap_;
  std::map<double, cx> terms_;
};

Series to_series(const AsymptoticExpansion& e, double shift, cx scale) {
  Series s(std::min(e.remainder_order - shift, kMaxExponent));
  for (const auto& t : e.terms) s.add(t.exponent - shift, t.coefficient / scale);
  return s;
}

bool on_cut(cx lambda) {
  return lambda == 0.0 || (lambda.imag() == 0.0 && lambda.real() < 0.0);
}

cx checked_log(cx lambda) {
  if (on_cut(lambda) || !std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw ComputationError("eigenvalue on the spectral cut (-inf, 0]");
  return std::log(lambda);
}

std::vector<double> lattice_multiplicities(std::size_t j_max) {
  std::vector<double> r2(j_max + 1, 0.0);
  const long bound = static_cast<long>(std::sqrt(static_cast<double>(j_max))) + 1;
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b) {
      const long j = a * a + b * b;
      if (j >= 1 && static_cast<std::size_t>(j) <= j_max) r2[j] += 1.0;
    }
  return r2;
}

// Laurent data at z = 0 of sum_j f j^{-eta + kappa z}.
ComplexLaurent subtracted_term(DirichletBase base, double eta, double kappa, cx f) {
  ComplexLaurent out;
  if (std::abs(eta - 1.0) < kExponentTol) {
    const ZetaLaurent d = dirichlet_base_laurent(base, 1.0);
    out.residue = -f * d.residue / kappa;
    out.finite_part = f * d.finite_part;
    out.derivative = -f * kappa * d.derivative;
  } else {
    const ZetaLaurent d = dirichlet_base_laurent(base, eta);
    out.finite_part = f * d.finite_part;
    out.derivative = -f * kappa * d.derivative;
  }
  return out;
}

struct RemainderSums {
  cx value{0};
  cx log_weighted{0};
};

// noise[j] is the rounding floor of r[j]; terms below it are ignored by the
// summability check.
RemainderSums remainder_sums(const std::vector<cx>& r, const std::vector<double>& noise, const std::vector<double>& mult,
                             double decay, bool extrapolate, bool check, bool need_log) {
  const std::size_t J = r.size();
  if (J == 0) return {};
  std::vector<cx> partial(J + 1, 0.0);
  cx log_sum = 0;
  for (std::size_t j = 1; j <= J; ++j) {
    const cx term = (mult.empty() ? 1.0 : mult[j]) * r[j - 1];
    partial[j] = partial[j - 1] + term;
    if (need_log) log_sum += term * std::log(static_cast<double>(j));
  }

  if (check && J >= 32) {
    double b1 = 0, b2 = 0;
    auto excess = [&](std::size_t j) {
      return (mult.empty() ? 1.0 : mult[j]) * std::max(0.0, std::abs(r[j - 1]) - noise[j - 1]);
    };
    for (std::size_t j = J / 4 + 1; j <= J / 2; ++j) b1 += excess(j);
    for (std::size_t j = J / 2 + 1; j <= J; ++j) b2 += excess(j);
    if (b1 > 0.0 && b2 > 0.95 * b1)
      throw ComputationError("expansion remainder is not summable (block ratio " + std::to_string(b2 / b1) + ")");
  }

  RemainderSums out{partial[J], log_sum};
  const double alpha = decay - 1.0;
  if (extrapolate && J >= 64 && alpha > 0 && alpha < 6) {
    const cx s[3] = {partial[J / 4], partial[J / 2], partial[J]};
    out.value = richardson3(s, static_cast<double>(J), alpha, alpha + 1.0);
  }
  return out;
}

ComplexLaurent branch_laurent(const SpectralBranch& br, const SpectralSum& opts) {
  const auto& ev = br.eigenvalue_expansion;
  if (ev.empty()) throw ContractViolation("branch without eigenvalue asymptotics");
  ev.check();
  const cx C = ev.terms.front().coefficient;
  const double kappa = -ev.terms.front().exponent;
  if (!(kappa > 0)) throw ContractViolation("eigenvalues must grow along a branch");
  const cx logC = checked_log(C);

  // l_j = log(1 + x_j), x_j = lambda_j / (C j^kappa) - 1
  Series x = to_series(ev, ev.terms.front().exponent, C);
  x.add(0.0, 0.0);
  Series xs(x.cap());
  for (const auto& [e, c] : x.terms())
    if (e > kExponentTol) xs.add(e, c);
  const Series ell = log1p(xs);

  const bool weighted = !br.weights.empty();
  if (weighted && br.weights.size() != br.eigenvalues.size())
    throw ContractViolation("weights and eigenvalues differ in length");
  Series w(kMaxExponent);
  if (weighted) {
    br.weight_expansion.check();
    w = to_series(br.weight_expansion, 0.0, 1.0);
  } else {
    w.add(0.0, 1.0);
  }

  const double ml = ell.min_exponent(), mw = w.min_exponent();
  const double cl = ell.cap(), cw = w.cap();
  const double caps[3] = {cw, std::min(cw + ml, cl + mw), std::min(cw + 2 * ml, cl + ml + mw)};
  const Series e1 = multiply(w, ell, caps[1]);
  const Series e2 = multiply(e1, ell, caps[2]);
  const Series* expansions[3] = {&w, &e1, &e2};

  const std::size_t J = br.eigenvalues.size();
  std::vector<double> mult;
  if (br.base == DirichletBase::SquareLattice) mult = lattice_multiplicities(J);

  std::vector<cx> ell_values(J);
  for (std::size_t j = 1; j <= J; ++j)
    ell_values[j - 1] = checked_log(br.eigenvalues[j - 1]) - logC - kappa * std::log(static_cast<double>(j));

  ComplexLaurent g[3];
  for (int i = 0; i < 3; ++i) {
    const Series& ex = *expansions[i];
    if (caps[i] <= 1.0 + kExponentTol)
      throw ComputationError("expansion remainder is not summable: first omitted exponent " + std::to_string(caps[i]));
    for (const auto& [eta, f] : ex.terms()) g[i] += subtracted_term(br.base, eta, kappa, f);

    std::vector<cx> r(J);
    std::vector<double> noise(J);
    for (std::size_t j = 1; j <= J; ++j) {
      const cx d = weighted ? br.weights[j - 1] : cx(1.0);
      cx e = d;
      for (int q = 0; q < i; ++q) e *= ell_values[j - 1];
      const cx sub = ex.evaluate(static_cast<double>(j));
      r[j - 1] = e - sub;
      noise[j - 1] = 1e-14 * (std::abs(d) * std::pow(1.0 + std::abs(std::log(br.eigenvalues[j - 1])), i) + std::abs(sub));
    }
    const RemainderSums rs = remainder_sums(r, noise, mult, caps[i], opts.extrapolate, opts.check_summability, i == 0);
    g[i].finite_part += rs.value;
    g[i].derivative += kappa * rs.log_weighted;
  }

  ComplexLaurent out;
  out.residue = g[0].residue;
  out.finite_part = g[0].finite_part + g[1].residue + logC * g[0].residue;
  out.derivative = g[0].derivative + g[1].finite_part + g[2].residue / 2.0 +
                   logC * (g[0].finite_part + g[1].residue) + logC * logC / 2.0 * g[0].residue;
  return out;
}

double radial_leading(const ModelOperator& a, int dim) { return dim == 1 ? a.power : a.power / 2.0; }

void require_circle_power(const ModelOperator& a) {
  if (a.kind != OperatorKind::CirclePower) throw UnsupportedOperation("A must be a CirclePower");
}

}  // namespace

void AsymptoticExpansion::check() const {
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (!(terms[i].exponent > terms[i - 1].exponent))
      throw ContractViolation("asymptotic expansion exponents must increase strictly");
  if (!terms.empty() && !(terms.back().exponent < remainder_order))
    throw ContractViolation("asymptotic expansion term beyond its remainder order");
}

std::complex<double> AsymptoticExpansion::evaluate(double n) const {
  cx sum = 0;
  for (const auto& t : terms) sum += t.coefficient * std::pow(n, -t.exponent);
  return sum;
}

ZetaLaurent dirichlet_base_laurent(DirichletBase base, double s0) {
  if (std::abs(s0 - 1.0) < kExponentTol) s0 = 1.0;
  return base == DirichletBase::Integers ? riemann_zeta_laurent(s0) : square_lattice_zeta_laurent(s0);
}

std::complex<double> richardson3(const std::complex<double> s[3], double j_max, double alpha1, double alpha2) {
  Eigen::Matrix3d m;
  const double js[3] = {std::floor(j_max / 4), std::floor(j_max / 2), j_max};
  for (int i = 0; i < 3; ++i) m.row(i) << 1.0, std::pow(js[i], -alpha1), std::pow(js[i], -alpha2);
  Eigen::Vector3cd rhs(s[0], s[1], s[2]);
  const Eigen::Vector3cd sol = m.cast<cx>().colPivHouseholderQr().solve(rhs);
  return sol(0);
}

ComplexLaurent spectral_laurent(const SpectralSum& sum) {
  ComplexLaurent out;
  for (const auto& [d, lambda] : sum.head) {
    out.finite_part += d;
    out.derivative += d * checked_log(lambda);
  }
  for (const auto& br : sum.branches) out += branch_laurent(br, sum);
  return out;
}

ZetaLaurent zeta_laurent_general(const std::vector<std::complex<double>>& eigenvalues,
                                 const AsymptoticExpansion& expansion) {
  SpectralSum sum;
  if (expansion.empty()) {
    for (cx l : eigenvalues) sum.head.emplace_back(1.0, l);
  } else {
    SpectralBranch br;
    br.eigenvalues = eigenvalues;
    br.eigenvalue_expansion = expansion;
    sum.branches.push_back(std::move(br));
  }
  return spectral_laurent(sum).real();
}

AsymptoticExpansion eigenvalue_expansion(const ModelOperator& op) {
  const int dim = op.dim;
  const double kappa = radial_leading(op.kind == OperatorKind::Product ? op.children.at(0) : op, dim);
  AsymptoticExpansion e;
  switch (op.kind) {
    case OperatorKind::CirclePower:
      e.terms.push_back({1.0, -kappa});
      return e;
    case OperatorKind::Product: {
      require_circle_power(op.children.at(0));
      const ModelOperator& t = op.children.at(1);
      const double sigma = dim == 1 ? t.decay : t.decay / 2.0;
      cx lead = 0;
      if (t.kind == OperatorKind::DiagonalPerturbation) {
        lead = op.coupling * t.amplitude;
      } else {
        auto it = t.u.find(0);
        lead = it == t.u.end() ? cx(0) : op.coupling * it->second;
        // off-diagonal couplings shift eigenvalues at relative order 2s
        if (!op.is_diagonal()) e.remainder_order = 2 * sigma - kappa;
      }
      e.terms.push_back({1.0, -kappa});
      if (lead != 0.0) e.terms.push_back({lead, sigma - kappa});
      if (e.remainder_order <= sigma - kappa) e.terms.pop_back();
      return e;
    }
    default:
      throw UnsupportedOperation("eigenvalue asymptotics of " + to_string(op.kind));
  }
}

SpectralSum spectral_sum(const ModelOperator& op, int N) {
  if (N < 1) throw ContractViolation("spectral_sum: truncation must be positive");
  SpectralSum sum;
  const AsymptoticExpansion expansion = eigenvalue_expansion(op);

  if (op.is_diagonal()) {
    if (op.dim == 1) {
      sum.head.emplace_back(1.0, op.eigenvalue(0));
      for (int sign : {1, -1}) {
        SpectralBranch br;
        br.eigenvalue_expansion = expansion;
        for (long j = 1; j <= N; ++j) br.eigenvalues.emplace_back(op.eigenvalue(sign * j));
        sum.branches.push_back(std::move(br));
      }
    } else {
      sum.head.emplace_back(1.0, op.eigenvalue(0, 0));
      SpectralBranch br;
      br.base = DirichletBase::SquareLattice;
      br.eigenvalue_expansion = expansion;
      const long J = static_cast<long>(N) * N;
      for (long j = 1; j <= J; ++j) br.eigenvalues.emplace_back(op.eigenvalue_at_radius(std::sqrt(static_cast<double>(j))));
      sum.branches.push_back(std::move(br));
    }
    return sum;
  }

  return spectral_sum(op, N, spectrum_dense(compress(op, N)));
}

SpectralSum spectral_sum(const ModelOperator& op, int N, std::vector<std::complex<double>> eigs) {
  if (eigs.size() != 2 * static_cast<std::size_t>(N) + 1)
    throw ContractViolation("spectral_sum: spectrum size does not match the truncation");
  SpectralSum sum;
  const AsymptoticExpansion expansion = eigenvalue_expansion(op);
  // sort the spectrum and assign it in mode order 0, 1, -1, 2, -2, ...
  std::sort(eigs.begin(), eigs.end(), [](cx a, cx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  // truncation distorts the top of the spectrum; only the limit N -> inf is meaningful
  sum.extrapolate = false;
  sum.check_summability = false;
  sum.head.emplace_back(1.0, eigs[0]);
  SpectralBranch pos, neg;
  pos.eigenvalue_expansion = neg.eigenvalue_expansion = expansion;
  for (int j = 1; j <= N; ++j) {
    pos.eigenvalues.push_back(eigs[2 * j - 1]);
    neg.eigenvalues.push_back(eigs[2 * j]);
  }
  sum.branches.push_back(std::move(pos));
  sum.branches.push_back(std::move(neg));
  return sum;
}

double log_det_zeta(const ModelOperator& op, int N) { return spectral_laurent(spectral_sum(op, N)).derivative.real(); }

double log_det_zeta(const std::vector<std::complex<double>>& eigenvalues, const AsymptoticExpansion& expansion) {
  return zeta_laurent_general(eigenvalues, expansion).derivative;
}

}  // namespace detanomaly

namespace detanomaly {

namespace {

using cx = std::complex<double>;

std::vector<std::pair<int, cx>> fourier_modes(const ModelOperator& t) {
  if (t.kind != OperatorKind::MultiplicationPerturbation)
    throw UnsupportedOperation("path sums need a multiplication perturbation");
  return {t.u.begin(), t.u.end()};
}

// Weighted trace data on one branch: lambda_j = a(sign j), d_j = (T^p)_{sign j}.
SpectralBranch trace_branch(const ModelOperator& t, int p, const ModelOperator& a, double coupling, int sign, int N) {
  SpectralBranch br;
  const bool perturbed = coupling != 0.0;
  const ModelOperator lam = perturbed ? make_product(a, t, coupling) : a;
  br.eigenvalue_expansion = eigenvalue_expansion(lam);
  if (a.dim == 1) {
    br.weight_expansion = power_diagonal_expansion(t, p, sign);
    for (long j = 1; j <= N; ++j) {
      br.eigenvalues.emplace_back(lam.eigenvalue(sign * j));
      br.weights.push_back(power_diagonal_entry(t, p, sign * j));
    }
    return br;
  }
  if (t.kind != OperatorKind::DiagonalPerturbation) throw UnsupportedOperation("non-diagonal perturbation on T^2");
  br.base = DirichletBase::SquareLattice;
  const double sigma = t.decay / 2.0;
  br.weight_expansion.terms.push_back({std::pow(t.amplitude, p), p * sigma});
  const long J = static_cast<long>(N) * N;
  for (long j = 1; j <= J; ++j) {
    const double r = std::sqrt(static_cast<double>(j));
    br.eigenvalues.emplace_back(lam.eigenvalue_at_radius(r));
    br.weights.emplace_back(std::pow(t.eigenvalue_at_radius(r), p));
  }
  return br;
}

ZetaLaurent trace_power_laurent(const ModelOperator& t, int p, const ModelOperator& a, double coupling, int N) {
  if (p < 1) throw ContractViolation("trace power needs p >= 1");
  if (a.kind != OperatorKind::CirclePower) throw UnsupportedOperation("A must be a CirclePower");
  if (t.dim != a.dim) throw ContractViolation("operators live on different manifolds");
  SpectralSum sum;
  if (a.dim == 1) {
    const double lam0 = a.eigenvalue(0) * (1.0 + coupling * (t.is_diagonal() ? t.eigenvalue(0) : 0.0));
    sum.head.emplace_back(power_diagonal_entry(t, p, 0), lam0);
    sum.branches.push_back(trace_branch(t, p, a, coupling, 1, N));
    sum.branches.push_back(trace_branch(t, p, a, coupling, -1, N));
  } else {
    sum.head.emplace_back(std::pow(t.eigenvalue(0, 0), p), a.eigenvalue(0, 0));
    sum.branches.push_back(trace_branch(t, p, a, coupling, 1, N));
  }
  return spectral_laurent(sum).real();
}

}  // namespace

std::complex<double> power_diagonal_entry(const ModelOperator& t, int p, long n) {
  if (p < 1) throw ContractViolation("power_diagonal_entry needs p >= 1");
  if (t.kind == OperatorKind::DiagonalPerturbation) return std::pow(t.eigenvalue(n), p);
  const auto modes = fourier_modes(t);
  // offsets o = q - n of the intermediate index
  std::map<long, cx> dp{{0, 1.0}};
  for (int step = 0; step < p; ++step) {
    std::map<long, cx> next;
    for (const auto& [o, v] : dp)
      for (const auto& [m, um] : modes) {
        const long q = o - m;
        next[q] += v * um * t.multiplier_weight(n + q);
      }
    dp = std::move(next);
  }
  auto it = dp.find(0);
  return it == dp.end() ? cx(0) : it->second;
}

AsymptoticExpansion power_diagonal_expansion(const ModelOperator& t, int p, int sign) {
  AsymptoticExpansion out;
  if (t.kind == OperatorKind::DiagonalPerturbation) {
    out.terms.push_back({std::pow(t.amplitude, p), p * t.decay});
    return out;
  }
  const auto modes = fourier_modes(t);
  const double s = t.decay;
  // w(sign j + o) = j^{-s} sum_r binom(-s, r) (sign o)^r j^{-r}
  auto weight_series = [&](long o) {
    Series w(kMaxExponent);
    double b = 1.0;
    for (int r = 0; s + r < kMaxExponent; ++r) {
      w.add(s + r, b * std::pow(static_cast<double>(sign * o), r));
      b *= (-s - r) / (r + 1.0);
    }
    return w;
  };
  Series one(kMaxExponent);
  one.add(0.0, 1.0);
  std::map<long, Series> dp;
  dp.emplace(0, one);
  for (int step = 0; step < p; ++step) {
    std::map<long, Series> next;
    for (const auto& [o, v] : dp)
      for (const auto& [m, um] : modes) {
        const long q = o - m;
        Series term = multiply(v, weight_series(q), kMaxExponent);
        auto [it, inserted] = next.emplace(q, Series(kMaxExponent));
        for (const auto& [e, c] : term.terms()) it->second.add(e, um * c);
      }
    dp = std::move(next);
  }
  out.remainder_order = kMaxExponent;
  auto it = dp.find(0);
  if (it == dp.end()) return out;
  for (const auto& [e, c] : it->second.terms())
    if (std::abs(c) > 0.0) out.terms.push_back({c, e});
  return out;
}

ZetaLaurent fp_trace_power(const ModelOperator& t, int p, const ModelOperator& a, int N) {
  return trace_power_laurent(t, p, a, 0.0, N);
}

ZetaLaurent fp_trace_power_perturbed(const ModelOperator& t, int p, const ModelOperator& a, double coupling, int N) {
  if (!t.is_diagonal()) throw UnsupportedOperation("perturbed trace powers need a diagonal perturbation");
  return trace_power_laurent(t, p, a, coupling, N);
}

}  // namespace detanomaly
