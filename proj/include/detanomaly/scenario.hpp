#pragma once

// Scenario files: flat key/value blocks, one per ProblemConfig.
//
//   # comment
//   [run]
//   out = reports
//   cache = .anomaly-cache
//
//   [diagonal-halfcase]
//   family = diagonal        # or multiplication
//   d = 1
//   k = 2
//   s = 1/2
//   c = 1/10
//   m = 3
//   N = 1024
//   u = -1:1/10, 1:1/10      # Fourier modes of u; complex values as (re,im)
//   tolerance = 1e-6         # main closure; tolerance.eq25 etc. for checks

#include "detanomaly/spectral_models.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace detanomaly {

struct RunOptions {
  std::optional<std::string> out;
  std::optional<std::string> cache;
  std::optional<int> jobs;
};

struct ScenarioFile {
  std::vector<ProblemConfig> scenarios;
  RunOptions run;

  const ProblemConfig* find(std::string_view name) const;
};

/// Throws ConfigError with field "<block>.<key>" (or "line <n>") on malformed
/// input; every block is validated.
ScenarioFile parse_scenarios(std::string_view text);
ScenarioFile load_scenarios(const std::filesystem::path& path);

/// Inverse of the parser for a single block.
std::string format_scenario(const ProblemConfig& cfg);

}  // namespace detanomaly
