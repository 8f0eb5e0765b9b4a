#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ggred {

inline constexpr const char* kReportVersion = "1.0";

/// Parsed run configuration. Parameters hold only what the user set; defaults
/// are filled in by the registry.
struct ScenarioConfig {
    std::string scenario;
    std::map<std::string, double> parameters;
    std::map<std::string, double> tolerances;  // "identity", "cross"
    std::vector<std::string> checks;           // empty: the scenario's defaults
    std::uint64_t seed = 42;
};

struct ScenarioInfo {
    std::string name;
    std::string description;
    std::map<std::string, double> defaults;
    std::vector<std::string> checks;  // available, in run order
};

/// Built-in scenarios in a fixed order.
const std::vector<ScenarioInfo>& scenario_registry();
/// Every check id with a one-line description, in a fixed order.
const std::vector<std::pair<std::string, std::string>>& check_registry();
const ScenarioInfo& find_scenario(const std::string& name);

/// Parses JSON text. Throws ConfigError naming the offending key or line.
ScenarioConfig parse_config(const std::string& text);
/// Applies a "key=value" override to the parameters.
void apply_override(ScenarioConfig& config, const std::string& assignment);
/// Rejects unknown scenarios, parameters, tolerances and checks (ConfigError).
void check_config(const ScenarioConfig& config);

struct CheckRecord {
    std::string id;
    int points = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::string status;  // "pass", "fail" or "exploratory"
    double value = 0.0;  // headline number for the text report (e.g. χ)
};

struct ScenarioReport {
    std::string version = kReportVersion;
    std::string scenario;
    std::map<std::string, double> parameters;  // resolved
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 42;
    std::vector<CheckRecord> checks;
    bool pass = true;
};

/// Builds the scenario and runs the requested checks. `jobs` only changes
/// scheduling. Throws ConfigError or ScenarioError before any check runs.
ScenarioReport run_scenario(const ScenarioConfig& config, int jobs = 1);

/// Schema check plus scenario setup with its invariant checks; no heavy work.
void validate_scenario(const ScenarioConfig& config);

std::string report_json(const ScenarioReport& report);
std::string report_text(const ScenarioReport& report);
/// Table of scenarios and checks for `list`.
std::string registry_text();

}  // namespace ggred
