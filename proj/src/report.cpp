#include "detanomaly/report.hpp"

#include "detanomaly/residue.hpp"

#include <cstdio>
#include <sstream>

namespace detanomaly {

namespace {

using nlohmann::json;

json check_json(const CheckResult& c) {
  json j{{"applicable", c.applicable}, {"pass", c.pass}, {"max_error", c.max_error}, {"tolerance", c.tolerance}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "% .15e", x);
  return buf;
}

}  // namespace

std::string report_status(const AnomalyReport& rep) {
  if (!rep.failed_stage.empty()) return "computation_error";
  return rep.pass ? "pass" : "tolerance_failure";
}

json config_json(const ProblemConfig& cfg) {
  json j{{"family", cfg.family == ModelFamily::Diagonal ? "diagonal" : "multiplication"},
         {"d", cfg.d},
         {"k", to_string(cfg.k)},
         {"s", to_string(cfg.s)},
         {"m", cfg.m},
         {"N", cfg.N}};
  if (cfg.family == ModelFamily::Diagonal) j["c"] = to_string(cfg.c);
  if (!cfg.u_coeffs.empty()) {
    json u = json::object();
    for (const auto& [mode, g] : cfg.u_coeffs) u[std::to_string(mode)] = to_string(g);
    j["u"] = u;
  }
  if (!cfg.tolerances.empty()) j["tolerances"] = cfg.tolerances;
  return j;
}

json report_json(const AnomalyReport& rep) {
  json j;
  j["scenario"] = rep.config.name;
  j["config"] = config_json(rep.config);
  j["status"] = report_status(rep);
  if (!rep.failed_stage.empty()) j["failed_stage"] = {{"stage", rep.failed_stage}, {"error", rep.error}};
  if (rep.lhs) {
    const LhsParts& l = *rep.lhs;
    j["lhs"] = {{"logdet_product", l.logdet_product.value},
                {"logdet_A", l.logdet_a.value},
                {"logdetm", l.logdetm.value},
                {"w", l.w},
                {"uncertainty",
                 {{"logdet_product", l.logdet_product.uncertainty},
                  {"logdet_A", l.logdet_a.uncertainty},
                  {"logdetm", l.logdetm.uncertainty}}},
                {"ladder", l.ladder},
                {"ladder_exponents", l.ladder_exponents},
                {"w_ladder", l.w_ladder}};
  }
  if (rep.rhs) {
    const RhsParts& r = *rep.rhs;
    json polys = json::array();
    for (std::size_t i = 0; i < r.residue_polynomials.size(); ++i) {
      json dens = json::object();
      for (const auto& [power, g] : r.residue_polynomials[i].density) dens[std::to_string(power)] = to_string(g);
      polys.push_back({{"p", i + 1}, {"density", dens}});
    }
    j["rhs"] = {{"fp_terms", r.fp_terms},
                {"fp_residues", r.fp_residues},
                {"residue_terms", r.residue_terms},
                {"residue_polynomials", polys},
                {"w", r.w}};
  }
  json checks = json::object();
  for (const auto& c : rep.checks) checks[c.name] = check_json(c);
  j["checks"] = checks;
  if (rep.special_case) j["special_case_half"] = *rep.special_case;
  j["discrepancy"] = rep.discrepancy;
  j["tolerance"] = rep.tolerance;
  j["pass"] = rep.pass;
  j["calibration"] = {{"rho", rep.rho},
                      {"base", symbol::base_residue_normalization(rep.config.d)},
                      {"factor", symbol::kResidueCalibration}};
  j["timing"] = rep.timing;
  return j;
}

std::string report_table(const AnomalyReport& rep) {
  std::ostringstream out;
  out << "scenario " << rep.config.name << "  (d=" << rep.config.d << " k=" << to_string(rep.config.k)
      << " s=" << to_string(rep.config.s) << " m=" << rep.config.m << " N=" << rep.config.N << ")\n";
  auto row = [&](const std::string& label, double v, const std::string& extra = "") {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %-32s", label.c_str());
    out << buf << num(v) << extra << "\n";
  };
  if (rep.lhs) {
    const LhsParts& l = *rep.lhs;
    row("log det A(I+T)", l.logdet_product.value, "  +- " + num(l.logdet_product.uncertainty));
    row("log det A", l.logdet_a.value, "  +- " + num(l.logdet_a.uncertainty));
    row("log det_m(I+T)", l.logdetm.value, "  +- " + num(l.logdetm.uncertainty));
    row("w (lhs)", l.w);
  }
  if (rep.rhs) {
    const RhsParts& r = *rep.rhs;
    for (std::size_t i = 0; i < r.fp_terms.size(); ++i) {
      const std::string p = std::to_string(i + 1);
      row("fp term p=" + p, r.fp_terms[i]);
      row("residue term p=" + p, r.residue_terms[i]);
    }
    row("w (rhs)", r.w);
  }
  if (rep.special_case) row("closed formula s=d/2", *rep.special_case);
  for (const auto& c : rep.checks) {
    if (!c.applicable) {
      out << "  check " << c.name << ": n/a\n";
      continue;
    }
    row("check " + c.name, c.max_error, std::string("  tol ") + num(c.tolerance) + (c.pass ? "  ok" : "  FAIL"));
  }
  if (!rep.failed_stage.empty()) out << "  failed stage " << rep.failed_stage << ": " << rep.error << "\n";
  row("discrepancy", rep.discrepancy, "  tol " + num(rep.tolerance));
  out << "  status " << report_status(rep) << "\n";
  return out.str();
}

}  // namespace detanomaly
