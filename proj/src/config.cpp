#include "cellflux/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

namespace cellflux {

namespace {

using nlohmann::json;

constexpr double two_pi = 2.0 * std::numbers::pi;

double require_positive(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key))
        throw ConfigError(where + ": missing field '" + key + "'");
    double v;
    try {
        v = j.at(key).get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
    if (!(v > 0.0))
        throw ConfigError(where + "." + key + " must be positive, got " + std::to_string(v));
    return v;
}

PeriodicForcing forcing_from_json(const json& j, double period, const std::string& where) {
    if (!j.contains("kind"))
        throw ConfigError(where + ": missing 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "constant")
            return PeriodicForcing::constant(period, j.at("value").get<double>());
        if (kind == "sinusoid" || kind == "raised_cos2") {
            const double offset = j.at("offset").get<double>();
            const double amplitude = j.at("amplitude").get<double>();
            const double cycles = j.value("cycles", 1.0);
            const double phase = j.value("phase", 0.0);
            const double omega = two_pi * cycles / period;
            return kind == "sinusoid"
                       ? PeriodicForcing::sinusoid(period, offset, amplitude, omega, phase)
                       : PeriodicForcing::raised_cos2(period, offset, amplitude, omega, phase);
        }
        if (kind == "harmonic")
            return PeriodicForcing::harmonic(period, j.at("cos").get<std::vector<double>>(),
                                             j.value("sin", std::vector<double>{}));
        if (kind == "table")
            return PeriodicForcing::table(period, j.at("values").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": unknown forcing kind '" + kind + "'");
}

json forcing_to_json(const PeriodicForcing& f) {
    json j;
    const double p = f.period();
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, forcing::Constant>) {
                j = {{"kind", "constant"}, {"value", s.value}};
            } else if constexpr (std::is_same_v<T, forcing::Sinusoid>) {
                j = {{"kind", "sinusoid"},
                     {"offset", s.offset},
                     {"amplitude", s.amplitude},
                     {"cycles", s.omega * p / two_pi},
                     {"phase", s.phase}};
            } else if constexpr (std::is_same_v<T, forcing::RaisedCos2>) {
                j = {{"kind", "raised_cos2"},
                     {"offset", s.offset},
                     {"amplitude", s.amplitude},
                     {"cycles", s.omega * p / two_pi},
                     {"phase", s.phase}};
            } else if constexpr (std::is_same_v<T, forcing::Harmonic>) {
                j = {{"kind", "harmonic"}, {"cos", s.cos_coeffs}, {"sin", s.sin_coeffs}};
            } else {
                j = {{"kind", "table"}, {"values", s.values}};
            }
        },
        f.spec());
    return j;
}

} // namespace

RunConfig config_from_json(const json& j) {
    if (!j.contains("model"))
        throw ConfigError("config: missing 'model' section");
    const json& m = j.at("model");
    const double period = require_positive(m, "period", "model");
    ModelParams model{forcing_from_json(m.contains("alpha") ? m.at("alpha") : json{}, period,
                                        "model.alpha"),
                      forcing_from_json(m.contains("gamma") ? m.at("gamma") : json{}, period,
                                        "model.gamma"),
                      require_positive(m, "beta", "model"),
                      require_positive(m, "sigma", "model"),
                      require_positive(m, "epsilon", "model"),
                      period};

    RunConfig cfg{std::move(model), {}, {}, {}};
    try {
        if (j.contains("solver")) {
            const json& s = j.at("solver");
            cfg.solver.grid_n = s.value("grid_n", cfg.solver.grid_n);
            cfg.solver.tol_step = s.value("tol_step", cfg.solver.tol_step);
            cfg.solver.tol_unique = s.value("tol_unique", cfg.solver.tol_unique);
            cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
            cfg.solver.samples = s.value("samples", cfg.solver.samples);
            if (s.contains("M_override"))
                cfg.solver.M_override = s.at("M_override").get<double>();
        }
        if (j.contains("trajectory")) {
            const json& t = j.at("trajectory");
            if (t.contains("initial_points"))
                cfg.trajectory.initial_points =
                    t.at("initial_points").get<std::vector<std::pair<double, double>>>();
            cfg.trajectory.random_points = t.value("random_points", cfg.trajectory.random_points);
            cfg.trajectory.random_low = t.value("random_low", cfg.trajectory.random_low);
            cfg.trajectory.random_high = t.value("random_high", cfg.trajectory.random_high);
            cfg.trajectory.steps_per_period =
                t.value("steps_per_period", cfg.trajectory.steps_per_period);
            cfg.trajectory.horizon_periods =
                t.value("horizon_periods", cfg.trajectory.horizon_periods);
            cfg.trajectory.attraction_tol =
                t.value("attraction_tol", cfg.trajectory.attraction_tol);
            cfg.trajectory.seed = t.value("seed", cfg.trajectory.seed);
        }
        if (j.contains("output")) {
            const json& o = j.at("output");
            cfg.output.directory = o.value("directory", cfg.output.directory);
            cfg.output.prefix = o.value("prefix", cfg.output.prefix);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (cfg.solver.grid_n < 4 || cfg.solver.grid_n % 2 != 0)
        throw ConfigError("solver.grid_n must be even and >= 4");
    if (cfg.solver.tol_step <= 0.0 || cfg.solver.tol_unique <= 0.0 ||
        cfg.trajectory.attraction_tol <= 0.0)
        throw ConfigError("config: tolerances must be positive");
    validate(cfg.model, cfg.solver.grid_n);
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["model"] = {{"alpha", forcing_to_json(cfg.model.alpha)},
                  {"gamma", forcing_to_json(cfg.model.gamma)},
                  {"beta", cfg.model.beta},
                  {"sigma", cfg.model.sigma},
                  {"epsilon", cfg.model.epsilon},
                  {"period", cfg.model.period}};
    j["solver"] = {{"grid_n", cfg.solver.grid_n},
                   {"tol_step", cfg.solver.tol_step},
                   {"tol_unique", cfg.solver.tol_unique},
                   {"max_iter", cfg.solver.max_iter},
                   {"samples", cfg.solver.samples}};
    if (cfg.solver.M_override)
        j["solver"]["M_override"] = *cfg.solver.M_override;
    j["trajectory"] = {{"initial_points", cfg.trajectory.initial_points},
                       {"random_points", cfg.trajectory.random_points},
                       {"random_low", cfg.trajectory.random_low},
                       {"random_high", cfg.trajectory.random_high},
                       {"steps_per_period", cfg.trajectory.steps_per_period},
                       {"horizon_periods", cfg.trajectory.horizon_periods},
                       {"attraction_tol", cfg.trajectory.attraction_tol},
                       {"seed", cfg.trajectory.seed}};
    j["output"] = {{"directory", cfg.output.directory}, {"prefix", cfg.output.prefix}};
    return j;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write config file: " + path.string());
    out << config_to_json(cfg).dump(2) << '\n';
}

RunConfig demo_config() {
    json j = {
        {"model",
         {{"alpha", {{"kind", "sinusoid"}, {"offset", 2.0}, {"amplitude", 1.0}, {"cycles", 1}}},
          {"gamma",
           {{"kind", "raised_cos2"}, {"offset", 1.0}, {"amplitude", 1.0}, {"cycles", 1}}},
          {"beta", 2.0},
          {"sigma", 1.0},
          {"epsilon", 0.2},
          {"period", 1.0}}},
        {"trajectory", {{"initial_points", {{1.0, 0.4}}}}},
    };
    return config_from_json(j);
}

} // namespace cellflux
