#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cellflux/config.hpp"
#include "cellflux/trajectory.hpp"

namespace fs = std::filesystem;
using namespace cellflux;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCondition = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitSingularity = 4;
constexpr int kExitConfig = 64;

struct Overrides {
    int grid = 0;
    double tol = 0.0;
    long long seed = -1;
};

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
    if (ov.grid > 0) {
        if (ov.grid < 4 || ov.grid % 2 != 0)
            throw ConfigError("--grid must be even and >= 4");
        cfg.solver.grid_n = ov.grid;
    }
    if (ov.tol > 0.0) {
        cfg.solver.tol_unique = ov.tol;
        cfg.solver.tol_step = ov.tol * 1e-2;
    }
    if (ov.seed >= 0)
        cfg.trajectory.seed = static_cast<unsigned long long>(ov.seed);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << header << '\n';
    const size_t rows = columns.empty() ? 0 : columns.front().size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << fmt(columns[c][r]);
        out << '\n';
    }
}

fs::path out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output.directory);
    return fs::path(cfg.output.directory) / (cfg.output.prefix + name);
}

void write_solution_files(const RunConfig& cfg, const Envelope& env, const IterationReport& rep) {
    const GridFunction& x = rep.minimal_x;
    std::vector<double> t(x.values().size());
    for (int k = 0; k <= x.n(); ++k)
        t[k] = x.node(k);
    write_csv(out_path(cfg, "periodic_solution.csv"), "t,x,y",
              {t, rep.minimal_x.values(), rep.minimal_y.values()});
    write_csv(out_path(cfg, "envelope.csv"), "t,sub_x,sub_y,super_x,super_y",
              {t, env.sub.x.values(), env.sub.y.values(), env.super.x.values(),
               env.super.y.values()});
    std::vector<double> n_col, ga, gd, gb;
    for (size_t i = 0; i < rep.chain_gaps.size(); ++i) {
        n_col.push_back(static_cast<double>(i + 1));
        ga.push_back(rep.chain_gaps[i].ascending);
        gd.push_back(rep.chain_gaps[i].descending);
        gb.push_back(rep.chain_gaps[i].between);
    }
    write_csv(out_path(cfg, "iteration_history.csv"), "n,gap_ascending,gap_descending,gap_between",
              {n_col, ga, gd, gb});
}

void write_summary(const RunConfig& cfg, const CellSolveResult& result) {
    std::ofstream out(out_path(cfg, "summary.txt"));
    out << "period=" << fmt(cfg.model.period) << '\n'
        << "grid_n=" << cfg.solver.grid_n << '\n'
        << "alpha_mean=" << fmt(result.alpha_mean) << '\n'
        << "gamma_mean=" << fmt(result.gamma_mean) << '\n'
        << "condition_D=" << fmt(result.condition) << '\n'
        << "sub_c_x=" << fmt(result.sub.c_x) << '\n'
        << "sub_c_y=" << fmt(result.sub.c_y) << '\n'
        << "theta=" << fmt(result.super_cfg.theta) << '\n'
        << "M_env=" << fmt(result.super_cfg.m_env) << '\n'
        << "M_used=" << fmt(result.iteration.M_used) << '\n'
        << "iterations=" << result.iteration.iterations << '\n'
        << "converged=" << (result.iteration.converged ? "true" : "false") << '\n'
        << "gap_between="
        << fmt(result.iteration.chain_gaps.empty() ? 0.0
                                                   : result.iteration.chain_gaps.back().between)
        << '\n'
        << "identity_residual_minimal=" << fmt(result.identity_minimal) << '\n'
        << "identity_residual_maximal=" << fmt(result.identity_maximal) << '\n'
        << "unique=" << (result.unique ? "true" : "false") << '\n'
        << "seed=" << cfg.trajectory.seed << '\n';
}

int cmd_check(const RunConfig& cfg) {
    const double alpha_mean = mean_decompose(cfg.model.alpha, cfg.solver.grid_n).first;
    const double gamma_mean = mean_decompose(cfg.model.gamma, cfg.solver.grid_n).first;
    const double d = cfg.model.beta * gamma_mean - cfg.model.sigma * alpha_mean;
    std::cout << "alpha_mean=" << fmt(alpha_mean) << '\n'
              << "gamma_mean=" << fmt(gamma_mean) << '\n'
              << "condition_D=" << fmt(d) << '\n'
              << "verdict=" << (d > 0.0 ? "positive periodic solution exists" : "no positive periodic solution")
              << '\n';
    return d > 0.0 ? kExitOk : kExitCondition;
}

int cmd_solve(const RunConfig& cfg, CellSolveResult* out_result = nullptr) {
    try {
        CellSolveResult result = solve_cell_model(cfg.model, cfg.solver);
        const Envelope env =
            build_envelope(cfg.model, result.sub, result.super_cfg, cfg.solver.grid_n);
        write_solution_files(cfg, env, result.iteration);
        write_summary(cfg, result);
        std::cout << "converged in " << result.iteration.iterations
                  << " iterations; identity residual " << fmt(result.identity_minimal)
                  << "; unique=" << (result.unique ? "true" : "false") << '\n';
        if (out_result)
            *out_result = std::move(result);
        return kExitOk;
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::vector<double> n_col, ga, gd, gb;
        for (size_t i = 0; i < e.report.chain_gaps.size(); ++i) {
            n_col.push_back(static_cast<double>(i + 1));
            ga.push_back(e.report.chain_gaps[i].ascending);
            gd.push_back(e.report.chain_gaps[i].descending);
            gb.push_back(e.report.chain_gaps[i].between);
        }
        write_csv(out_path(cfg, "iteration_history.csv"),
                  "n,gap_ascending,gap_descending,gap_between", {n_col, ga, gd, gb});
        return kExitNonConvergence;
    }
}

int cmd_simulate(const RunConfig& cfg) {
    CellSolveResult result = solve_cell_model(cfg.model, cfg.solver);

    std::vector<std::pair<double, double>> points = cfg.trajectory.initial_points;
    std::mt19937_64 rng(cfg.trajectory.seed);
    std::uniform_real_distribution<double> dist(cfg.trajectory.random_low,
                                                cfg.trajectory.random_high);
    for (int i = 0; i < cfg.trajectory.random_points; ++i)
        points.emplace_back(dist(rng), dist(rng));

    const double step = cfg.model.period / cfg.trajectory.steps_per_period;
    bool all_pass = true;
    for (size_t i = 0; i < points.size(); ++i) {
        const auto [x0, y0] = points[i];
        Trajectory traj;
        try {
            traj = integrate(cfg.model, x0, y0, step, cfg.trajectory.horizon_periods);
        } catch (const SingularityApproached& e) {
            std::cerr << "error: initial point (" << fmt(x0) << ", " << fmt(y0)
                      << "): " << e.what() << '\n';
            return kExitSingularity;
        }
        const AttractionReport att = attraction_metrics(
            traj, result.iteration.minimal_x, result.iteration.minimal_y,
            cfg.trajectory.attraction_tol);
        write_csv(out_path(cfg, "trajectory_" + std::to_string(i) + ".csv"), "t,x,y",
                  {traj.times, traj.x, traj.y});
        std::vector<double> k_col, d_col, r_col;
        for (size_t k = 0; k < att.distances.size(); ++k) {
            k_col.push_back(static_cast<double>(k));
            d_col.push_back(att.distances[k]);
            r_col.push_back(k < att.ratios.size() ? att.ratios[k] : 0.0);
        }
        write_csv(out_path(cfg, "attraction_" + std::to_string(i) + ".csv"), "k,d_k,ratio",
                  {k_col, d_col, r_col});
        std::cout << "point (" << fmt(x0) << ", " << fmt(y0) << "): d_final="
                  << fmt(att.distances.back()) << " verdict=" << (att.pass ? "pass" : "fail")
                  << '\n';
        all_pass = all_pass && att.pass;
    }
    return all_pass ? kExitOk : 1;
}

int run(int argc, char** argv) {
    CLI::App app{"Positive periodic solutions of the cell-volume flux system by monotone "
                 "iteration, with hypothesis verification and attraction diagnostics"};
    app.require_subcommand(1);

    Overrides ov;
    app.add_option("--grid", ov.grid, "Override solver grid size N (even)");
    app.add_option("--tol", ov.tol, "Override uniqueness tolerance (step tol becomes tol/100)");
    app.add_option("--seed", ov.seed, "Override Monte-Carlo seed");

    std::string config_path;
    std::string demo_out = "demo_out";
    auto* check = app.add_subcommand("check", "Evaluate the existence condition");
    check->add_option("config", config_path, "Config file (JSON)")->required();
    auto* solve = app.add_subcommand("solve", "Compute the periodic solution");
    solve->add_option("config", config_path, "Config file (JSON)")->required();
    auto* simulate = app.add_subcommand("simulate", "Integrate trajectories and verify attraction");
    simulate->add_option("config", config_path, "Config file (JSON)")->required();
    auto* demo = app.add_subcommand("demo", "Run check + solve + simulate on the built-in example");
    demo->add_option("--out", demo_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    if (demo->parsed()) {
        RunConfig cfg = demo_config();
        apply_overrides(cfg, ov);
        cfg.output.directory = demo_out;
        save_config(cfg, out_path(cfg, "config.json"));
        int rc = cmd_check(cfg);
        if (rc != kExitOk)
            return rc;
        rc = cmd_solve(cfg);
        if (rc != kExitOk)
            return rc;
        return cmd_simulate(cfg);
    }

    RunConfig cfg = load_config(config_path);
    apply_overrides(cfg, ov);
    if (check->parsed())
        return cmd_check(cfg);
    if (solve->parsed())
        return cmd_solve(cfg);
    return cmd_simulate(cfg);
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConditionViolated& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCondition;
    } catch (const SingularityApproached& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSingularity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
