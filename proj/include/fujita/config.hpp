#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fujita/core.hpp"
#include "fujita/grid.hpp"
#include "fujita/solver.hpp"

namespace fujita {

/// Invalid scenario document. The message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    ProblemParams problem;
    ProfileSpec profile;
    // Initial data is the stationary profile v of the constructed forcing.
    bool profile_stationary = false;
    // Zero the boundary node of the initial data (homogeneous Dirichlet).
    bool zero_boundary = true;
    // Signed-dipole mean to tune a_minus against, when requested.
    std::optional<double> dipole_target_mean;
    double L = 12.0;
    int M = 1200;
    SolveConfig solve;
    std::string output_dir = "out";
};

/// Validates and converts a scenario document. Unknown keys are rejected;
/// p and q accept a number or a [numerator, denominator] pair.
ScenarioConfig parse_scenario(const nlohmann::json& doc);

/// Number or [num, den].
double parse_rational(const nlohmann::json& value, const std::string& key);

}  // namespace fujita
