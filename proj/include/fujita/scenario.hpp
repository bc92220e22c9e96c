#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "fujita/config.hpp"
#include "fujita/solver.hpp"

namespace fujita {

/// Everything a single run produces, held in memory until written.
struct ScenarioResult {
    Field initial;
    std::optional<Field> forcing;
    SolveOutcome outcome;
    // Sup-node error against the heat kernel, for pure-heat runs from one Gaussian.
    std::optional<double> max_error_vs_reference;
    nlohmann::json summary;  // contents of outcome.json
};

/// Builds the grid, initial data and forcing, then runs the solver.
ScenarioResult execute_scenario(const ScenarioConfig& cfg);

/// Writes trace.csv, final_field.csv and outcome.json into `dir` (created if needed).
/// All three documents are rendered before the first file is opened.
void write_scenario_outputs(const ScenarioResult& result, const std::filesystem::path& dir);

}  // namespace fujita
