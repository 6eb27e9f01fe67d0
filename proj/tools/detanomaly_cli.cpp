// detanomaly: runs scenario files through the anomaly harness.
//
//   detanomaly verify <scenario-file> [--out DIR] [--cache DIR] [--jobs K] [--strict]
//   detanomaly term <scenario-file> [--scenario NAME] --name fp|residue|logdet|detm
//
// Exit status: 0 pass, 1 tolerance failure, 2 config error, 3 computation error.

#include "detanomaly/anomaly.hpp"
#include "detanomaly/errors.hpp"
#include "detanomaly/fredholm.hpp"
#include "detanomaly/report.hpp"
#include "detanomaly/residue.hpp"
#include "detanomaly/scenario.hpp"
#include "detanomaly/spectrum_cache.hpp"
#include "detanomaly/zeta_continuation.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

namespace fs = std::filesystem;
using namespace detanomaly;

namespace {

enum Exit { kPass = 0, kTolerance = 1, kConfig = 2, kComputation = 3 };

std::unique_ptr<SpectrumCache> open_cache(const std::string& flag, const RunOptions& run) {
  std::string dir = flag;
  if (dir.empty() && run.cache) dir = *run.cache;
  if (const char* env = std::getenv("ANOMALY_CACHE"); env && *env) dir = env;
  if (dir.empty()) return nullptr;
  return std::make_unique<SpectrumCache>(dir);
}

int run_verify(const std::string& path, std::string out_dir, const std::string& cache_dir, int jobs, bool strict) {
  const ScenarioFile file = load_scenarios(path);
  if (out_dir.empty()) out_dir = file.run.out.value_or("reports");
  if (jobs <= 0) jobs = file.run.jobs.value_or(1);
  auto cache = open_cache(cache_dir, file.run);

  HarnessOptions opts;
  if (cache) opts.spectrum = cache->provider();

  std::vector<AnomalyReport> reports(file.scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < reports.size(); i = next++) reports[i] = verify(file.scenarios[i], opts);
  };
  std::vector<std::thread> pool;
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(reports.size())));
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  fs::create_directories(out_dir);
  int status = kPass;
  for (auto& rep : reports) {
    if (cache) {
      const auto st = cache->stats();
      rep.timing["cache_hits"] = st.hits;
      rep.timing["cache_misses"] = st.misses;
      rep.timing["eigensolves"] = st.eigensolves;
    }
    const std::string table = report_table(rep);
    std::cout << table << "\n";
    std::ofstream(fs::path(out_dir) / (rep.config.name + ".json")) << report_json(rep).dump(2) << "\n";
    std::ofstream(fs::path(out_dir) / (rep.config.name + ".txt")) << table;
    if (!rep.failed_stage.empty())
      status = kComputation;
    else if ((!rep.pass || (strict && !rep.subsidiary_pass())) && status == kPass)
      status = kTolerance;
  }
  if (cache) {
    const auto st = cache->stats();
    std::cerr << "cache: " << st.hits << " hits, " << st.misses << " misses, " << st.eigensolves << " eigensolves ("
              << st.eigensolve_seconds << " s)\n";
    for (const auto& w : cache->warnings()) std::cerr << "warning: " << w << "\n";
  }
  return status;
}

const ProblemConfig& pick(const ScenarioFile& file, const std::string& name) {
  if (name.empty()) {
    if (file.scenarios.size() == 1) return file.scenarios.front();
    std::string names;
    for (const auto& s : file.scenarios) names += " " + s.name;
    throw ConfigError("scenario", "file has several scenarios, pick one of:" + names);
  }
  const ProblemConfig* cfg = file.find(name);
  if (!cfg) throw ConfigError("scenario", "no block named '" + name + "'");
  return *cfg;
}

void print(const std::string& label, double v) { std::printf("%-34s % .17g\n", label.c_str(), v); }

int run_term(const std::string& path, const std::string& scenario, const std::string& name, const std::string& cache_dir) {
  const ScenarioFile file = load_scenarios(path);
  const ProblemConfig& cfg = pick(file, scenario);
  const OperatorKind t_kind =
      cfg.family == ModelFamily::Diagonal ? OperatorKind::DiagonalPerturbation : OperatorKind::MultiplicationPerturbation;
  const ModelOperator a = make_operator(cfg, OperatorKind::CirclePower);
  const ModelOperator t = make_operator(cfg, t_kind);
  const int n_fp = cfg.d == 1 ? 2048 : 256;

  if (name == "fp") {
    for (int p = 1; p < cfg.m; ++p) {
      const ZetaLaurent z = fp_trace_power(t, p, a, n_fp);
      print("fp tr(T^" + std::to_string(p) + " A^z)", z.finite_part);
      print("res tr(T^" + std::to_string(p) + " A^z)", z.residue);
    }
  } else if (name == "residue") {
    const auto tau = symbol_of_t(cfg);
    const auto a_sym = symbol_of_a(cfg);
    std::printf("rho = %.17g\n", symbol::residue_normalization(cfg.d));
    for (int p = 1; p < cfg.m; ++p) {
      const auto poly = symbol::res_qp_polynomial(tau, p, a_sym, cfg.d);
      std::printf("res Q_%d(t):", p);
      if (poly.density.empty()) std::printf(" 0");
      for (const auto& [j, g] : poly.density) std::printf("  t^%d: density %s", j, to_string(g).c_str());
      std::printf("\n");
      print("  int_0^1 t^" + std::to_string(p - 1) + " res Q_" + std::to_string(p) + " dt",
            poly.integrate_against_power(p));
    }
  } else if (name == "logdet") {
    auto cache = open_cache(cache_dir, file.run);
    HarnessOptions opts;
    if (cache) opts.spectrum = cache->provider();
    const LhsSample s = lhs_sample(cfg, 1.0, cfg.N, opts);
    print("log det A", s.logdet_a);
    print("log det A(I+T)", s.logdet_product);
  } else if (name == "detm") {
    const DetmValue v = det_m_model(t, 1.0, cfg.m, cfg.N);
    print("log det_" + std::to_string(cfg.m) + "(I+T)", v.log_value);
    print("phase", v.phase);
    print("tail bound", v.tail_bound);
  } else {
    throw ConfigError("name", "unknown term '" + name + "' (fp, residue, logdet, detm)");
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplicative anomaly of zeta-regularized determinants"};
  app.require_subcommand(1);

  std::string file, out, cache, scenario, term_name;
  int jobs = 0;
  bool strict = false;

  auto* verify_cmd = app.add_subcommand("verify", "compute both sides for every scenario in a file");
  verify_cmd->add_option("scenario-file", file)->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--out", out, "report directory");
  verify_cmd->add_option("--cache", cache, "spectrum cache directory (ANOMALY_CACHE overrides)");
  verify_cmd->add_option("--jobs", jobs, "scenarios run in parallel")->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--strict", strict, "fail on subsidiary checks too");

  auto* term_cmd = app.add_subcommand("term", "print a single term of one scenario");
  term_cmd->add_option("scenario-file", file)->required()->check(CLI::ExistingFile);
  term_cmd->add_option("--scenario", scenario, "block name");
  term_cmd->add_option("--name", term_name, "fp, residue, logdet or detm")->required();
  term_cmd->add_option("--cache", cache, "spectrum cache directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  try {
    if (*verify_cmd) return run_verify(file, out, cache, jobs, strict);
    return run_term(file, scenario, term_name, cache);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kComputation;
  }
}
