#include "detanomaly/scenario.hpp"

#include "detanomaly/anomaly.hpp"
#include "detanomaly/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace detanomaly {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t depth = 0, start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && depth > 0) --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

int to_int(std::string_view v, const std::string& field) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(field, "expected an integer, got '" + std::string(v) + "'");
  return out;
}

Rational to_rational(std::string_view v, const std::string& field) {
  auto q = parse_rational(v);
  if (!q) throw ConfigError(field, "expected a rational (p/q or decimal), got '" + std::string(v) + "'");
  return *q;
}

double to_real(std::string_view v, const std::string& field) {
  const std::string s(v);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigError(field, "expected a number, got '" + s + "'");
  return x;
}

GaussRational to_gauss(std::string_view v, const std::string& field) {
  if (!v.empty() && v.front() == '(') {
    if (v.back() != ')') throw ConfigError(field, "unbalanced parenthesis in '" + std::string(v) + "'");
    const auto parts = split(v.substr(1, v.size() - 2), ',');
    if (parts.size() != 2) throw ConfigError(field, "complex coefficient is (re,im)");
    return {to_rational(parts[0], field), to_rational(parts[1], field)};
  }
  return GaussRational{to_rational(v, field)};
}

std::map<int, GaussRational> to_fourier(std::string_view v, const std::string& field) {
  std::map<int, GaussRational> out;
  for (std::string_view item : split(v, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ConfigError(field, "expected mode:coefficient, got '" + std::string(item) + "'");
    const int mode = to_int(trim(item.substr(0, colon)), field);
    if (out.count(mode)) throw ConfigError(field, "mode " + std::to_string(mode) + " given twice");
    out[mode] = to_gauss(trim(item.substr(colon + 1)), field);
  }
  return out;
}

void assign(ProblemConfig& cfg, std::string_view key, std::string_view value, const std::string& field) {
  if (key == "family") {
    if (value == "diagonal")
      cfg.family = ModelFamily::Diagonal;
    else if (value == "multiplication")
      cfg.family = ModelFamily::Multiplication;
    else
      throw ConfigError(field, "family is 'diagonal' or 'multiplication'");
  } else if (key == "d") {
    cfg.d = to_int(value, field);
  } else if (key == "k") {
    cfg.k = to_rational(value, field);
  } else if (key == "s") {
    cfg.s = to_rational(value, field);
  } else if (key == "c") {
    cfg.c = to_rational(value, field);
  } else if (key == "m") {
    cfg.m = to_int(value, field);
  } else if (key == "N") {
    cfg.N = to_int(value, field);
  } else if (key == "u") {
    cfg.u_coeffs = to_fourier(value, field);
  } else if (key == "tolerance") {
    cfg.tolerances["w"] = to_real(value, field);
  } else if (key.starts_with("tolerance.")) {
    cfg.tolerances[std::string(key.substr(10))] = to_real(value, field);
  } else {
    throw ConfigError(field, "unknown key");
  }
}

void assign_run(RunOptions& run, std::string_view key, std::string_view value, const std::string& field) {
  if (key == "out")
    run.out = std::string(value);
  else if (key == "cache")
    run.cache = std::string(value);
  else if (key == "jobs")
    run.jobs = to_int(value, field);
  else
    throw ConfigError(field, "unknown run option");
}

}  // namespace

const ProblemConfig* ScenarioFile::find(std::string_view name) const {
  for (const auto& s : scenarios)
    if (s.name == name) return &s;
  return nullptr;
}

ScenarioFile parse_scenarios(std::string_view text) {
  ScenarioFile out;
  std::string block;
  bool in_run = false, seen_run = false;
  std::set<std::string> names, keys;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int line_no = 1; std::getline(in, raw); ++line_no) {
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where, "unterminated block header");
      block = std::string(trim(line.substr(1, line.size() - 2)));
      if (block.empty()) throw ConfigError(where, "empty block name");
      keys.clear();
      in_run = block == "run";
      if (in_run) {
        if (seen_run) throw ConfigError(where, "second [run] block");
        seen_run = true;
        continue;
      }
      if (!names.insert(block).second) throw ConfigError(block, "duplicate scenario name");
      out.scenarios.emplace_back();
      out.scenarios.back().name = block;
      continue;
    }
    if (block.empty()) throw ConfigError(where, "key outside of a [block]");
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(block + " " + where, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string field = block + "." + std::string(key);
    if (value.empty()) throw ConfigError(field, "missing value");
    if (!keys.insert(std::string(key)).second) throw ConfigError(field, "key given twice");
    if (in_run)
      assign_run(out.run, key, value, field);
    else
      assign(out.scenarios.back(), key, value, field);
  }
  if (out.run.jobs && *out.run.jobs < 1) throw ConfigError("run.jobs", "must be at least 1");
  for (const auto& cfg : out.scenarios) {
    try {
      validate_for_harness(cfg);
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      throw ConfigError(cfg.name + "." + e.field(), msg.substr(e.field().size() + 2));
    }
  }
  return out;
}

ScenarioFile load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot read scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenarios(ss.str());
}

std::string format_scenario(const ProblemConfig& cfg) {
  std::ostringstream out;
  out << "[" << cfg.name << "]\n";
  out << "family = " << (cfg.family == ModelFamily::Diagonal ? "diagonal" : "multiplication") << "\n";
  out << "d = " << cfg.d << "\nk = " << to_string(cfg.k) << "\ns = " << to_string(cfg.s) << "\n";
  if (cfg.family == ModelFamily::Diagonal) out << "c = " << to_string(cfg.c) << "\n";
  out << "m = " << cfg.m << "\nN = " << cfg.N << "\n";
  if (!cfg.u_coeffs.empty()) {
    out << "u = ";
    bool first = true;
    for (const auto& [mode, g] : cfg.u_coeffs) {
      out << (first ? "" : ", ") << mode << ":";
      if (g.im == 0)
        out << to_string(g.re);
      else
        out << "(" << to_string(g.re) << "," << to_string(g.im) << ")";
      first = false;
    }
    out << "\n";
  }
  for (const auto& [key, tol] : cfg.tolerances) {
    std::ostringstream v;
    v.precision(17);
    v << tol;
    out << (key == "w" ? "tolerance" : "tolerance." + key) << " = " << v.str() << "\n";
  }
  return out.str();
}

}  // namespace detanomaly
