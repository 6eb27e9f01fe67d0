#include "detanomaly/spectral_models.hpp"

#include "detanomaly/errors.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace detanomaly {

double ProblemConfig::tolerance(const std::string& key, double fallback) const {
  auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

void validate(const ProblemConfig& cfg) {
  if (cfg.d != 1 && cfg.d != 2) throw ConfigError("d", "dimension must be 1 or 2");
  if (cfg.k <= 0) throw ConfigError("k", "order of A must be positive");
  if (cfg.s <= 0) throw ConfigError("s", "order of T must be negative (s > 0)");
  if (cfg.m < 1) throw ConfigError("m", "regularization level must be a positive integer");
  if (Rational(cfg.m) * cfg.s <= cfg.d) throw ConfigError("m", "m must exceed d/s");
  if (cfg.N <= 0) throw ConfigError("N", "truncation must be positive");
  for (const auto& [n, v] : cfg.u_coeffs) {
    auto it = cfg.u_coeffs.find(-n);
    const GaussRational mirror = it == cfg.u_coeffs.end() ? GaussRational{} : it->second;
    if (!(mirror == v.conj())) throw ConfigError("u", "coefficients must be conjugate symmetric (u real-valued)");
  }
  if (cfg.family == ModelFamily::Multiplication) {
    if (cfg.d != 1) throw ConfigError("d", "multiplication models live on S^1");
    if (cfg.u_coeffs.empty()) throw ConfigError("u", "multiplication model needs Fourier coefficients");
  }
  for (const auto& [key, tol] : cfg.tolerances)
    if (!(tol > 0) || !std::isfinite(tol)) throw ConfigError(key, "tolerance must be positive and finite");
}

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::CirclePower: return "CirclePower";
    case OperatorKind::DiagonalPerturbation: return "DiagonalPerturbation";
    case OperatorKind::MultiplicationPerturbation: return "MultiplicationPerturbation";
    case OperatorKind::Product: return "Product";
  }
  return "?";
}

bool ModelOperator::is_diagonal() const {
  switch (kind) {
    case OperatorKind::CirclePower:
    case OperatorKind::DiagonalPerturbation: return true;
    case OperatorKind::MultiplicationPerturbation: return u.empty() || (u.size() == 1 && u.begin()->first == 0);
    case OperatorKind::Product:
      return std::all_of(children.begin(), children.end(), [](const auto& c) { return c.is_diagonal(); });
  }
  return false;
}

double ModelOperator::multiplier_weight(long q) const {
  return q == 0 ? 1.0 : std::pow(static_cast<double>(std::labs(q)), -decay);
}

namespace {

double radial_eigenvalue(const ModelOperator& op, double radius, bool at_origin) {
  switch (op.kind) {
    case OperatorKind::CirclePower: return at_origin ? 1.0 : std::pow(radius, op.power);
    case OperatorKind::DiagonalPerturbation: return at_origin ? 0.0 : op.amplitude * std::pow(radius, -op.decay);
    case OperatorKind::MultiplicationPerturbation: {
      if (!op.is_diagonal()) break;
      const double mean = op.u.empty() ? 0.0 : op.u.begin()->second.real();
      return mean * (at_origin ? 1.0 : std::pow(radius, -op.decay));
    }
    case OperatorKind::Product: {
      if (!op.is_diagonal()) break;
      const double a = radial_eigenvalue(op.children.at(0), radius, at_origin);
      const double t = radial_eigenvalue(op.children.at(1), radius, at_origin);
      return a * (1.0 + op.coupling * t);
    }
  }
  throw UnsupportedOperation("eigenvalues of non-diagonal " + to_string(op.kind));
}

}  // namespace

double ModelOperator::eigenvalue(long n) const {
  return radial_eigenvalue(*this, static_cast<double>(std::labs(n)), n == 0);
}

double ModelOperator::eigenvalue(long n1, long n2) const {
  const double r = std::hypot(static_cast<double>(n1), static_cast<double>(n2));
  return radial_eigenvalue(*this, r, n1 == 0 && n2 == 0);
}

double ModelOperator::eigenvalue_at_radius(double r) const { return radial_eigenvalue(*this, r, false); }

symbol::ClassicalSymbol symbol_of_a(const ProblemConfig& cfg) {
  return symbol::ClassicalSymbol::power(cfg.k, Rational(1), kSymbolCutoff);
}

symbol::ClassicalSymbol symbol_of_t(const ProblemConfig& cfg) {
  if (cfg.family == ModelFamily::Diagonal) return symbol::ClassicalSymbol::power(-cfg.s, cfg.c, kSymbolCutoff);
  return symbol::ClassicalSymbol::multiplier(-cfg.s, symbol::TrigPolynomial::from_modes(cfg.u_coeffs), kSymbolCutoff);
}

ModelOperator make_operator(const ProblemConfig& cfg, OperatorKind kind) {
  validate(cfg);
  ModelOperator op;
  op.kind = kind;
  op.dim = cfg.d;
  op.power = to_double(cfg.k);
  op.decay = to_double(cfg.s);
  switch (kind) {
    case OperatorKind::CirclePower:
      op.order = op.power;
      op.symbol = symbol_of_a(cfg);
      break;
    case OperatorKind::DiagonalPerturbation:
      op.order = -op.decay;
      op.amplitude = to_double(cfg.c);
      op.symbol = symbol::ClassicalSymbol::power(-cfg.s, cfg.c, kSymbolCutoff);
      break;
    case OperatorKind::MultiplicationPerturbation:
      if (cfg.d != 1) throw UnsupportedOperation("multiplication perturbation on T^2");
      op.order = -op.decay;
      for (const auto& [n, v] : cfg.u_coeffs) op.u.emplace(n, v.to_complex());
      op.symbol = symbol::ClassicalSymbol::multiplier(-cfg.s, symbol::TrigPolynomial::from_modes(cfg.u_coeffs),
                                                       kSymbolCutoff);
      break;
    case OperatorKind::Product: {
      const OperatorKind tk = cfg.family == ModelFamily::Diagonal ? OperatorKind::DiagonalPerturbation
                                                                   : OperatorKind::MultiplicationPerturbation;
      return make_product(make_operator(cfg, OperatorKind::CirclePower), make_operator(cfg, tk), 1.0);
    }
  }
  return op;
}

ModelOperator make_product(const ModelOperator& a, const ModelOperator& t, double coupling) {
  if (a.kind != OperatorKind::CirclePower) throw UnsupportedOperation("product expects A = CirclePower");
  ModelOperator op;
  op.kind = OperatorKind::Product;
  op.dim = a.dim;
  op.order = a.order;
  op.power = a.power;
  op.decay = t.decay;
  op.coupling = coupling;
  op.children = {a, t};
  return op;
}

std::vector<long> circle_mode_order(int N) {
  std::vector<long> modes;
  modes.reserve(2 * static_cast<std::size_t>(N) + 1);
  modes.push_back(0);
  for (long n = 1; n <= N; ++n) {
    modes.push_back(n);
    modes.push_back(-n);
  }
  return modes;
}

std::vector<double> diagonal_eigenvalues(const ModelOperator& op, int N) {
  if (!op.is_diagonal()) throw UnsupportedOperation("diagonal_eigenvalues of non-diagonal " + to_string(op.kind));
  std::vector<double> out;
  if (op.dim == 1) {
    for (long n : circle_mode_order(N)) out.push_back(op.eigenvalue(n));
    return out;
  }
  std::vector<std::tuple<long, long, long>> points;
  const long r2 = static_cast<long>(N) * N;
  for (long a = -N; a <= N; ++a)
    for (long b = -N; b <= N; ++b)
      if (a * a + b * b <= r2) points.emplace_back(a * a + b * b, a, b);
  std::sort(points.begin(), points.end());
  out.reserve(points.size());
  for (const auto& [norm, a, b] : points) out.push_back(op.eigenvalue(a, b));
  return out;
}

}  // namespace detanomaly
