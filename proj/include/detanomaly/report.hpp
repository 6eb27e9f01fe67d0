#pragma once

// Serialization of AnomalyReport: a JSON document and a plain-text table.
// "timing" is the only field that differs between identical runs.

#include "detanomaly/anomaly.hpp"

#include <json.hpp>

#include <string>

namespace detanomaly {

nlohmann::json config_json(const ProblemConfig& cfg);
nlohmann::json report_json(const AnomalyReport& rep);
std::string report_table(const AnomalyReport& rep);

/// "pass", "tolerance_failure" or "computation_error".
std::string report_status(const AnomalyReport& rep);

}  // namespace detanomaly
