#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cellflux/cell_model.hpp"

namespace cellflux {

/// Trajectory block of a run configuration.
struct TrajectoryConfig {
    std::vector<std::pair<double, double>> initial_points{{1.0, 0.4}};
    int random_points = 0;          ///< extra seeded Monte-Carlo initial points
    double random_low = 0.05, random_high = 5.0;
    int steps_per_period = 2000;
    int horizon_periods = 20;
    double attraction_tol = 1e-4;
    unsigned long long seed = 20240808ULL;
};

struct OutputConfig {
    std::string directory = "out";
    std::string prefix;
};

/// Everything a CLI run needs; mirrors the config file sections.
struct RunConfig {
    ModelParams model;
    SolverConfig solver;
    TrajectoryConfig trajectory;
    OutputConfig output;
};

/// Parse / serialize; parse errors carry the offending location.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);

/// The built-in demo configuration: alpha = 2 + sin(2 pi t),
/// gamma = 1 + cos^2(2 pi t), beta = 2, sigma = 1, epsilon = 0.2, period 1,
/// trajectory from (1, 0.4).
RunConfig demo_config();

} // namespace cellflux
