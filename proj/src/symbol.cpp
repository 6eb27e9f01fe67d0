#include "detanomaly/symbol.hpp"

#include "detanomaly/errors.hpp"

#include <cmath>

namespace detanomaly::symbol {

// ---------------------------------------------------------------------------
// TrigPolynomial

TrigPolynomial TrigPolynomial::constant(GaussRational c) {
  TrigPolynomial t;
  if (!c.is_zero()) t.modes_.emplace(0, std::move(c));
  return t;
}

TrigPolynomial TrigPolynomial::from_modes(std::map<int, GaussRational> modes) {
  TrigPolynomial t;
  t.modes_ = std::move(modes);
  t.prune();
  return t;
}

bool TrigPolynomial::is_constant() const {
  return modes_.empty() || (modes_.size() == 1 && modes_.begin()->first == 0);
}

GaussRational TrigPolynomial::mean() const { return coefficient(0); }

GaussRational TrigPolynomial::coefficient(int mode) const {
  auto it = modes_.find(mode);
  return it == modes_.end() ? GaussRational{} : it->second;
}

std::complex<double> TrigPolynomial::evaluate(double x) const {
  std::complex<double> v{0.0, 0.0};
  for (const auto& [m, c] : modes_) v += c.to_complex() * std::polar(1.0, m * x);
  return v;
}

TrigPolynomial TrigPolynomial::dx_power(int order) const {
  if (order == 0) return *this;
  TrigPolynomial t;
  for (const auto& [m, c] : modes_) {
    if (m == 0) continue;
    t.modes_.emplace(m, c * pow_int(Rational(m), order));
  }
  return t;
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& o) {
  for (const auto& [m, c] : o.modes_) modes_[m] += c;
  prune();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator-=(const TrigPolynomial& o) {
  for (const auto& [m, c] : o.modes_) modes_[m] -= c;
  prune();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(const GaussRational& c) {
  for (auto& [m, v] : modes_) v *= c;
  prune();
  return *this;
}

TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
  TrigPolynomial t;
  for (const auto& [ma, ca] : a.modes_)
    for (const auto& [mb, cb] : b.modes_) t.modes_[ma + mb] += ca * cb;
  t.prune();
  return t;
}

void TrigPolynomial::prune() {
  std::erase_if(modes_, [](const auto& kv) { return kv.second.is_zero(); });
}

// ---------------------------------------------------------------------------
// ClassicalSymbol

namespace {

RayPair uniform(const TrigPolynomial& t) { return {t, t}; }

RayPair scale_rays(const RayPair& r, const GaussRational& plus, const GaussRational& minus) {
  return {r.plus * plus, r.minus * minus};
}

std::complex<double> ray_value(const RayPair& r, double x, double xi) {
  return xi > 0 ? r.plus.evaluate(x) : r.minus.evaluate(x);
}

}  // namespace

ClassicalSymbol ClassicalSymbol::power(Rational degree, GaussRational c, Rational cutoff) {
  ClassicalSymbol s(std::move(cutoff));
  s.add(degree, uniform(TrigPolynomial::constant(std::move(c))));
  return s;
}

ClassicalSymbol ClassicalSymbol::multiplier(Rational degree, TrigPolynomial u, Rational cutoff) {
  ClassicalSymbol s(std::move(cutoff));
  s.add(degree, uniform(u));
  return s;
}

const Rational& ClassicalSymbol::order() const {
  if (components_.empty()) throw ContractViolation("order of the zero symbol");
  return components_.begin()->first;
}

RayPair ClassicalSymbol::component(const Rational& degree) const {
  auto it = components_.find(degree);
  return it == components_.end() ? RayPair{} : it->second;
}

bool ClassicalSymbol::is_x_independent() const {
  for (const auto& [d, r] : components_)
    if (!r.plus.is_constant() || !r.minus.is_constant()) return false;
  return true;
}

void ClassicalSymbol::add(const Rational& degree, const RayPair& rays) {
  if (degree < cutoff_ || rays.is_zero()) return;
  auto& slot = components_[degree];
  slot += rays;
  if (slot.is_zero()) components_.erase(degree);
}

ClassicalSymbol ClassicalSymbol::truncated(Rational cutoff) const {
  ClassicalSymbol s(std::move(cutoff));
  for (const auto& [d, r] : components_) s.add(d, r);
  return s;
}

ClassicalSymbol ClassicalSymbol::scaled(const GaussRational& c) const {
  ClassicalSymbol s(cutoff_);
  for (const auto& [d, r] : components_) s.add(d, scale_rays(r, c, c));
  return s;
}

ClassicalSymbol& ClassicalSymbol::operator+=(const ClassicalSymbol& o) {
  for (const auto& [d, r] : o.components_) add(d, r);
  return *this;
}

ClassicalSymbol& ClassicalSymbol::operator-=(const ClassicalSymbol& o) {
  for (const auto& [d, r] : o.components_) add(d, scale_rays(r, Rational(-1), Rational(-1)));
  return *this;
}

std::complex<double> ClassicalSymbol::evaluate(double x, double xi) const {
  std::complex<double> v{0.0, 0.0};
  for (const auto& [d, r] : components_) v += ray_value(r, x, xi) * std::pow(std::abs(xi), to_double(d));
  return v;
}

namespace {

// d/dxi of r |xi|^d on each ray: (d |xi|^{d-1}, -d |xi|^{d-1}).
ClassicalSymbol xi_derivative(const ClassicalSymbol& a) {
  ClassicalSymbol out(a.cutoff() - 1);
  for (const auto& [d, r] : a.components())
    if (d != 0) out.add(d - 1, scale_rays(r, d, Rational(-d)));
  return out;
}

}  // namespace

PrincipalSymbol principal_symbol(const ClassicalSymbol& a) {
  if (a.is_zero()) throw ContractViolation("principal symbol of the zero symbol");
  const Rational& k = a.order();
  const RayPair& top = a.components().begin()->second;
  if (k <= 0) throw ContractViolation("principal symbol must have positive order");
  if (!top.plus.is_constant() || !top.minus.is_constant())
    throw ContractViolation("principal symbol must be x-independent");
  const GaussRational p = top.plus.mean();
  const GaussRational m = top.minus.mean();
  if (p.im != 0 || m.im != 0 || p.re <= 0 || m.re <= 0)
    throw ContractViolation("principal symbol vanishes or leaves the Agmon sector");
  return {k, p.re, m.re};
}

// ---------------------------------------------------------------------------
// ParameterSymbol

ParameterSymbol ParameterSymbol::lift(const ClassicalSymbol& a, PrincipalSymbol principal, Rational weight_cutoff) {
  ParameterSymbol s(std::move(principal), std::move(weight_cutoff));
  for (const auto& [d, r] : a.components()) s.add({d, 0}, r);
  return s;
}

ParameterSymbol ParameterSymbol::lambda_minus(const ClassicalSymbol& a, Rational weight_cutoff) {
  PrincipalSymbol principal = principal_symbol(a);
  ParameterSymbol s(principal, std::move(weight_cutoff));
  s.add({Rational(0), -1}, uniform(TrigPolynomial::constant(Rational(1))));
  bool first = true;
  for (const auto& [d, r] : a.components()) {
    if (first) {
      first = false;
      continue;
    }
    s.add({d, 0}, scale_rays(r, Rational(-1), Rational(-1)));
  }
  return s;
}

Rational ParameterSymbol::max_weight() const {
  if (terms_.empty()) throw ContractViolation("weight of the zero symbol");
  Rational best = weight(terms_.begin()->first);
  for (const auto& [key, r] : terms_) best = std::max(best, weight(key));
  return best;
}

RayPair ParameterSymbol::coefficient(const Rational& w, int pole_order) const {
  auto it = terms_.find(Key{w + principal_.order * pole_order, pole_order});
  return it == terms_.end() ? RayPair{} : it->second;
}

std::vector<Rational> ParameterSymbol::weights() const {
  std::vector<Rational> out;
  for (const auto& [key, r] : terms_) out.push_back(weight(key));
  std::sort(out.begin(), out.end(), std::greater<>());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void ParameterSymbol::add(const Key& key, const RayPair& rays) {
  if (weight(key) < cutoff_ || rays.is_zero()) return;
  auto& slot = terms_[key];
  slot += rays;
  if (slot.is_zero()) terms_.erase(key);
}

ParameterSymbol ParameterSymbol::truncated(Rational weight_cutoff) const {
  ParameterSymbol s(principal_, std::move(weight_cutoff));
  for (const auto& [key, r] : terms_) s.add(key, r);
  return s;
}

ParameterSymbol ParameterSymbol::shifted_pole(int shift) const {
  ParameterSymbol s(principal_, cutoff_ - principal_.order * shift);
  for (const auto& [key, r] : terms_) s.add({key.degree, key.pole_order + shift}, r);
  return s;
}

ParameterSymbol ParameterSymbol::xi_derivative() const {
  ParameterSymbol s(principal_, cutoff_ - 1);
  const Rational& k = principal_.order;
  for (const auto& [key, r] : terms_) {
    const auto& [d, j] = key;
    if (d != 0) s.add({d - 1, j}, scale_rays(r, d, Rational(-d)));
    // j f (d_xi a_k) (lambda - a_k)^{-j-1}
    if (j != 0) s.add({d + k - 1, j + 1}, scale_rays(r, Rational(k * principal_.plus * j), Rational(-k * principal_.minus * j)));
  }
  return s;
}

ParameterSymbol& ParameterSymbol::operator+=(const ParameterSymbol& o) {
  for (const auto& [key, r] : o.terms_) add(key, r);
  return *this;
}

ParameterSymbol& ParameterSymbol::operator-=(const ParameterSymbol& o) {
  for (const auto& [key, r] : o.terms_) add(key, scale_rays(r, Rational(-1), Rational(-1)));
  return *this;
}

std::complex<double> ParameterSymbol::evaluate(double x, double xi, std::complex<double> lambda) const {
  const double k = to_double(principal_.order);
  const double alpha = to_double(xi > 0 ? principal_.plus : principal_.minus);
  const std::complex<double> gap = lambda - alpha * std::pow(std::abs(xi), k);
  std::complex<double> v{0.0, 0.0};
  for (const auto& [key, r] : terms_)
    v += ray_value(r, x, xi) * std::pow(std::abs(xi), to_double(key.degree)) * std::pow(gap, -key.pole_order);
  return v;
}

// ---------------------------------------------------------------------------
// Composition

ClassicalSymbol compose(const ClassicalSymbol& a, const ClassicalSymbol& b, const Rational& cutoff) {
  ClassicalSymbol out(cutoff);
  if (a.is_zero() || b.is_zero()) return out;
  const Rational top = a.order() + b.order();
  ClassicalSymbol da = a;
  for (int alpha = 0; top - alpha >= cutoff; ++alpha) {
    if (alpha > 0) da = xi_derivative(da).scaled(Rational(1, alpha));
    if (da.is_zero()) break;
    for (const auto& [db, rb] : b.components()) {
      const RayPair dxb{rb.plus.dx_power(alpha), rb.minus.dx_power(alpha)};
      if (dxb.is_zero()) continue;
      for (const auto& [dega, ra] : da.components()) out.add(dega + db, ra * dxb);
    }
  }
  return out;
}

ParameterSymbol compose(const ParameterSymbol& a, const ParameterSymbol& b, const Rational& weight_cutoff) {
  ParameterSymbol out(a.principal(), weight_cutoff);
  if (a.is_zero() || b.is_zero()) return out;
  const Rational top = a.max_weight() + b.max_weight();
  ParameterSymbol da = a;
  for (int alpha = 0; top - alpha >= weight_cutoff; ++alpha) {
    if (alpha > 0) {
      ParameterSymbol next = da.xi_derivative();
      da = ParameterSymbol(a.principal(), next.weight_cutoff());
      for (const auto& [key, r] : next.terms())
        da.add(key, scale_rays(r, Rational(1, alpha), Rational(1, alpha)));
    }
    if (da.is_zero()) break;
    for (const auto& [kb, rb] : b.terms()) {
      const RayPair dxb{rb.plus.dx_power(alpha), rb.minus.dx_power(alpha)};
      if (dxb.is_zero()) continue;
      for (const auto& [ka, ra] : da.terms())
        out.add({ka.degree + kb.degree, ka.pole_order + kb.pole_order}, ra * dxb);
    }
  }
  return out;
}

ClassicalSymbol compose_power(const ClassicalSymbol& tau, int p, const Rational& cutoff) {
  if (p < 0) throw ContractViolation("negative composition power");
  ClassicalSymbol out = ClassicalSymbol::power(Rational(0), Rational(1), cutoff);
  for (int i = 0; i < p; ++i) out = compose(out, tau, cutoff);
  return out;
}

ResolventSymbol resolvent_parametrix(const ClassicalSymbol& a, const Rational& weight_cutoff) {
  const PrincipalSymbol principal = principal_symbol(a);
  const Rational& k = principal.order;
  const RayPair one = uniform(TrigPolynomial::constant(Rational(1)));

  const ParameterSymbol lam = ParameterSymbol::lambda_minus(a, weight_cutoff);
  ParameterSymbol identity(principal, weight_cutoff + k);
  identity.add({Rational(0), 0}, one);

  ResolventSymbol r(principal, weight_cutoff);
  r.add({Rational(0), 1}, one);
  // Each pass removes the leading homogeneous piece of the defect; the
  // weights live on a discrete lattice bounded below, so this terminates.
  constexpr int kMaxPasses = 10000;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    ParameterSymbol defect = identity;
    defect -= compose(lam, r, weight_cutoff + k);
    if (defect.is_zero()) return r;
    r += defect.shifted_pole(1).truncated(weight_cutoff);
  }
  throw ContractViolation("resolvent parametrix recursion did not terminate");
}

std::vector<ResolventSymbol> resolvent_difference(const ClassicalSymbol& a, const ClassicalSymbol& tau, int q_max,
                                                  const Rational& weight_cutoff) {
  const ResolventSymbol r = resolvent_parametrix(a, weight_cutoff);
  const ParameterSymbol a_tau =
      ParameterSymbol::lift(compose(a, tau, weight_cutoff), r.principal(), weight_cutoff);
  // a tau (lambda - a)^{-1} has weight -s <= 0, so truncating every partial
  // product at the cutoff loses nothing above it.
  const ParameterSymbol step = compose(a_tau, r, weight_cutoff);

  std::vector<ResolventSymbol> out;
  out.reserve(static_cast<std::size_t>(q_max) + 1);
  out.emplace_back(r.principal(), weight_cutoff);
  ResolventSymbol current = r;
  for (int q = 1; q <= q_max; ++q) {
    current = compose(current, step, weight_cutoff);
    out.push_back(current);
  }
  return out;
}

double log_contour_kernel(int pole_order, double a) {
  if (pole_order < 1) throw ContractViolation("log contour integral diverges for pole order < 1");
  if (pole_order == 1) return std::log(a);
  return to_double(log_contour_factor(pole_order)) * std::pow(a, 1 - pole_order);
}

Rational log_contour_factor(int pole_order) {
  if (pole_order < 2) throw ContractViolation("closed-form factor needs pole order >= 2");
  return Rational(pole_order % 2 == 0 ? 1 : -1, pole_order - 1);
}

ClassicalSymbol contour_log(const ResolventSymbol& r) {
  const PrincipalSymbol& pr = r.principal();
  ClassicalSymbol out(r.weight_cutoff() + pr.order);
  for (const auto& [key, rays] : r.terms()) {
    const auto& [d, j] = key;
    if (j == 1) throw ContractViolation("net residue at lambda = a_k does not vanish");
    if (j < 1) throw ContractViolation("term polynomial in lambda under the log contour");
    const Rational f = log_contour_factor(j);
    out.add(d + pr.order * (1 - j), scale_rays(rays, f * pow_int(pr.plus, 1 - j), f * pow_int(pr.minus, 1 - j)));
  }
  return out;
}

std::vector<ClassicalSymbol> qp_symbol(const ClassicalSymbol& tau, int p, const ClassicalSymbol& a, int q_max,
                                       const Rational& cutoff) {
  if (p < 1) throw ContractViolation("qp_symbol needs p >= 1");
  const Rational& k = principal_symbol(a).order;
  const auto diffs = resolvent_difference(a, tau, q_max, cutoff - k);
  const ClassicalSymbol tau_p = compose_power(tau, p, cutoff);
  std::vector<ClassicalSymbol> out;
  out.reserve(diffs.size());
  out.emplace_back(cutoff);
  for (int q = 1; q <= q_max; ++q) out.push_back(compose(tau_p, contour_log(diffs[q]), cutoff));
  return out;
}

}  // namespace detanomaly::symbol
