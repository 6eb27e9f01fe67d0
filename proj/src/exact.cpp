#include "detanomaly/exact.hpp"

#include <cctype>
#include <cmath>

namespace detanomaly {

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

std::optional<boost::multiprecision::cpp_int> parse_integer(std::string_view t) {
  if (t.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (t[0] == '+' || t[0] == '-') {
    neg = t[0] == '-';
    i = 1;
  }
  if (i == t.size()) return std::nullopt;
  boost::multiprecision::cpp_int v = 0;
  for (; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return std::nullopt;
    v = v * 10 + (t[i] - '0');
  }
  return neg ? -v : v;
}

std::optional<Rational> parse_decimal(std::string_view t) {
  if (t.empty()) return std::nullopt;
  long exponent = 0;
  if (auto e = t.find_first_of("eE"); e != std::string_view::npos) {
    auto ex = parse_integer(t.substr(e + 1));
    if (!ex || abs(*ex) > 400) return std::nullopt;
    exponent = ex->convert_to<long>();
    t = t.substr(0, e);
  }
  bool neg = false;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    neg = t[0] == '-';
    t.remove_prefix(1);
  }
  std::string digits;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char ch : t) {
    if (ch == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      seen_digit = true;
      if (seen_dot) --exponent;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  auto mant = parse_integer(digits);
  if (!mant) return std::nullopt;
  Rational q(*mant);
  q *= pow_int(Rational(10), exponent);
  return neg ? Rational(-q) : q;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_integer(text.substr(0, slash));
    auto den = parse_integer(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rational pow_int(const Rational& q, long e) {
  Rational base = e < 0 ? Rational(1) / q : q;
  unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Rational r(1);
  while (n) {
    if (n & 1UL) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

long floor_to_long(const Rational& q) {
  boost::multiprecision::cpp_int n = numerator(q);
  boost::multiprecision::cpp_int d = denominator(q);
  boost::multiprecision::cpp_int f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f.convert_to<long>();
}

bool is_integer(const Rational& q) { return denominator(q) == 1; }

std::string to_string(const GaussRational& g) {
  if (g.im == 0) return to_string(g.re);
  return "(" + to_string(g.re) + (g.im < 0 ? " - " : " + ") + to_string(abs(g.im)) + "i)";
}

}  // namespace detanomaly
