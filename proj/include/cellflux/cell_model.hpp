#pragma once

#include <optional>

#include "cellflux/monotone.hpp"
#include "cellflux/periodic.hpp"

namespace cellflux {

/// Coefficients of the solute-mass / water-volume flux system
///   x' = alpha(t) - beta * x / y
///   y' = -gamma(t) + sigma * x / y + epsilon / y
/// with positive periodic forcings alpha, gamma and positive constants
/// beta, sigma, epsilon.
struct ModelParams {
    PeriodicForcing alpha;
    PeriodicForcing gamma;
    double beta;
    double sigma;
    double epsilon;
    double period;
};

/// Validate positivity of the forcings on the grid and of the constants.
void validate(const ModelParams& params, int n);

struct RhsValue {
    double f, g;
    double f_x, f_y, g_x, g_y;
};

/// Right-hand sides and analytic partials at (t, x, y); y must be positive
/// (the model is singular at y = 0).
RhsValue rhs(const ModelParams& params, double t, double x, double y);

/// Wrap the model as a CooperativeSystem for the monotone engine.
CooperativeSystem make_system(const ModelParams& params);

/// D = beta * mean(gamma) - sigma * mean(alpha). A positive periodic solution
/// exists iff D > 0.
double necessary_condition(const ModelParams& params, int n);

/// |D - (epsilon * beta / p) * integral(1/y)|: the integral identity every
/// positive periodic solution satisfies exactly; near zero certifies a
/// genuine solution, O(1) flags a non-solution.
double identity_residual(const ModelParams& params, const GridFunction& y_component);

/// Constant subsolution pair (c_x, c_y) with factor-2 safety margins on both
/// differential inequalities. Note: the source material writes (p, q) for
/// this pair; renamed since p is also the period.
struct Subsolution {
    double c_x, c_y;
    double margin_x, margin_y; ///< strict positive slack of the two inequalities
};
Subsolution build_subsolution(const ModelParams& params, int n);

/// Parameters of the supersolution construction: A solves
/// A' = alpha + theta - beta*A/M_env and B = M_env + y0 with y0' = -gamma_tilde
/// (y0 normalized to zero mean).
struct SupersolutionConfig {
    double theta;
    double m_env;
};

PairWithDeriv build_supersolution(const ModelParams& params, const SupersolutionConfig& cfg,
                                  int n);

/// theta = D / (2*sigma); M_env doubles from a data-driven floor until the
/// supersolution inequalities, positivity of B, and envelope ordering all
/// hold. Requires D > 0.
SupersolutionConfig select_theta_m(const ModelParams& params, int n);

struct SolverConfig {
    int grid_n = 2048;
    double tol_step = 1e-9;   ///< relative, see MonotoneConfig
    double tol_unique = 1e-7; ///< relative
    int max_iter = 5000;
    std::optional<double> M_override;
    int samples = 33;
};

struct CellSolveResult {
    double condition;  ///< D
    double alpha_mean, gamma_mean;
    Subsolution sub;
    SupersolutionConfig super_cfg;
    VerifyReport cooperativity, sub_check, super_check;
    IterationReport iteration;
    double identity_minimal;  ///< identity residual of the minimal solution
    double identity_maximal;
    bool unique; ///< minimal and maximal coincide within tol_unique
};

/// Full pipeline: condition check, envelope construction and verification,
/// monotone iteration, identity residuals and the uniqueness verdict.
/// Throws ConditionViolated when D <= 0.
CellSolveResult solve_cell_model(const ModelParams& params, const SolverConfig& cfg = {});

/// Build the verified envelope (subsolution constants + supersolution pair)
/// without running the iteration.
Envelope build_envelope(const ModelParams& params, const Subsolution& sub,
                        const SupersolutionConfig& cfg, int n);

} // namespace cellflux
