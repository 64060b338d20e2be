#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "iplab/schedule.hpp"
#include "iplab/simplex.hpp"

// Scenario presets and the config-driven experiment runner behind the CLI:
// deterministic CSV/JSON artifact bundles with a pass/fail flag per preset
// tolerance.

namespace iplab {

/// Configuration error carrying the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct ExperimentConfig {
    std::string scenario;
    std::vector<std::uint64_t> seeds{1};
    std::uint64_t horizon = 0;      // 0 = scenario default
    std::uint64_t burn_in = 0;      // 0 = scenario default
    std::uint64_t log_stride = 0;   // 0 = scenario default
    std::string out_dir = "out";
    std::string kappa = "sqrt";
    std::vector<std::string> rules;          // scenario default when empty
    std::uint64_t min_count = 0;             // subsequence estimate threshold
    std::uint64_t trials = 0;                // concentration grid trials
    std::optional<std::vector<std::vector<double>>> credal_set;
    std::optional<std::vector<std::vector<double>>> target_path;
    std::optional<ToleranceSchedule> schedule;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ScenarioInfo {
    std::string id;
    std::string summary;
};

std::vector<ScenarioInfo> list_scenarios();

/// Throws ConfigError (with field path) on an invalid config, including an
/// unknown scenario id, for which the message names the nearest match.
void validate(const ExperimentConfig& cfg);

struct ScenarioResult {
    bool pass = false;
    nlohmann::json summary;
    std::vector<std::string> artifacts;  // paths of files written
};

/// Runs the scenario and writes its artifact bundle under
/// out_dir/<scenario>/. Deterministic: identical configs give byte
/// identical CSVs; the summary JSON isolates wall-clock fields.
ScenarioResult run_scenario(const ExperimentConfig& cfg);

KappaFn parse_kappa(const std::string& name);

}  // namespace iplab
