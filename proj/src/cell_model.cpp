#include "cellflux/cell_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace cellflux {

void validate(const ModelParams& params, int n) {
    if (params.beta <= 0.0 || params.sigma <= 0.0 || params.epsilon <= 0.0)
        throw ConfigError("cell model: beta, sigma, epsilon must all be positive");
    if (params.period <= 0.0)
        throw ConfigError("cell model: period must be positive");
    if (params.alpha.period() != params.period || params.gamma.period() != params.period)
        throw ConfigError("cell model: forcing periods must match the model period");
    const GridFunction a = sample(params.alpha, n);
    const GridFunction g = sample(params.gamma, n);
    if (a.min() <= 0.0)
        throw ConfigError("cell model: alpha(t) must be positive on the grid");
    if (g.min() <= 0.0)
        throw ConfigError("cell model: gamma(t) must be positive on the grid");
}

RhsValue rhs(const ModelParams& params, double t, double x, double y) {
    if (y <= 0.0)
        throw DomainError("cell model: y = " + std::to_string(y) +
                          " is outside the domain (model singular at y = 0)");
    const double a = params.alpha(t);
    const double g = params.gamma(t);
    const double ratio = x / y;
    RhsValue v;
    v.f = a - params.beta * ratio;
    v.g = -g + params.sigma * ratio + params.epsilon / y;
    v.f_x = -params.beta / y;
    v.f_y = params.beta * x / (y * y);
    v.g_x = params.sigma / y;
    v.g_y = -(params.sigma * x + params.epsilon) / (y * y);
    return v;
}

CooperativeSystem make_system(const ModelParams& params) {
    CooperativeSystem sys;
    sys.period = params.period;
    sys.f = [params](double t, double x, double y) { return rhs(params, t, x, y).f; };
    sys.g = [params](double t, double x, double y) { return rhs(params, t, x, y).g; };
    sys.f_x = [params](double t, double x, double y) { return rhs(params, t, x, y).f_x; };
    sys.f_y = [params](double t, double x, double y) { return rhs(params, t, x, y).f_y; };
    sys.g_x = [params](double t, double x, double y) { return rhs(params, t, x, y).g_x; };
    sys.g_y = [params](double t, double x, double y) { return rhs(params, t, x, y).g_y; };
    return sys;
}

double necessary_condition(const ModelParams& params, int n) {
    const double alpha_mean = mean_decompose(params.alpha, n).first;
    const double gamma_mean = mean_decompose(params.gamma, n).first;
    return params.beta * gamma_mean - params.sigma * alpha_mean;
}

double identity_residual(const ModelParams& params, const GridFunction& y_component) {
    if (y_component.min() <= 0.0)
        throw DomainError("identity_residual: y component must be positive on the grid");
    const int n = y_component.n();
    const double d = necessary_condition(params, n);
    const GridFunction inv_y = y_component.map([](double v) { return 1.0 / v; });
    const double rhs_value =
        params.epsilon * params.beta / params.period * integrate_period(inv_y);
    return std::abs(d - rhs_value);
}

Subsolution build_subsolution(const ModelParams& params, int n) {
    const GridFunction alpha = sample(params.alpha, n);
    const GridFunction gamma = sample(params.gamma, n);
    const double alpha_min = alpha.min();
    const double gamma_max = gamma.max();

    // Ratio with a factor-2 margin on beta*c_x/c_y < min alpha, then c_y small
    // enough that epsilon/c_y dominates the second inequality with margin 2.
    const double ratio = alpha_min / (2.0 * params.beta);
    const double denom = std::max(gamma_max - params.sigma * ratio, params.epsilon / 2.0);
    const double c_y = std::min(1.0, params.epsilon / (2.0 * denom));
    const double c_x = ratio * c_y;

    Subsolution sub{c_x, c_y, 0.0, 0.0};
    sub.margin_x = alpha_min - params.beta * ratio;
    double worst_g = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k)
        worst_g = std::min(worst_g, -gamma[k] + params.sigma * ratio + params.epsilon / c_y);
    sub.margin_y = worst_g;
    return sub;
}

PairWithDeriv build_supersolution(const ModelParams& params, const SupersolutionConfig& cfg,
                                  int n) {
    if (cfg.theta <= 0.0 || cfg.m_env <= 0.0)
        throw ConstructionError("build_supersolution: theta and M_env must be positive");
    const auto [gamma_mean, gamma_tilde] = mean_decompose(params.gamma, n);
    (void)gamma_mean;
    GridFunction minus_tilde = gamma_tilde;
    minus_tilde *= -1.0;
    const GridFunction y0 = zero_mean_primitive(minus_tilde);
    if (cfg.m_env <= y0.sup_norm())
        throw ConstructionError("build_supersolution: M_env = " + std::to_string(cfg.m_env) +
                                " does not dominate |y0|; B would not stay positive");

    GridFunction alpha = sample(params.alpha, n);
    GridFunction forcing = alpha;
    forcing += cfg.theta;
    const GridFunction a_comp = solve_linear_periodic(params.beta / cfg.m_env, forcing);

    GridFunction b_comp = y0;
    b_comp += cfg.m_env;

    // Exact derivatives from the defining ODEs.
    GridFunction da = forcing;
    for (int k = 0; k <= n; ++k)
        da[k] -= params.beta / cfg.m_env * a_comp[k];
    GridFunction db = minus_tilde;

    return {a_comp, b_comp, std::move(da), std::move(db)};
}

SupersolutionConfig select_theta_m(const ModelParams& params, int n) {
    const double d = necessary_condition(params, n);
    if (d <= 0.0)
        throw ConditionViolated("select_theta_m: beta*mean(gamma) - sigma*mean(alpha) = " +
                                std::to_string(d) + " <= 0; no positive periodic solution");
    const double theta = d / (2.0 * params.sigma);

    const auto [gamma_mean, gamma_tilde] = mean_decompose(params.gamma, n);
    GridFunction minus_tilde = gamma_tilde;
    minus_tilde *= -1.0;
    const GridFunction y0 = zero_mean_primitive(minus_tilde);
    const Subsolution sub = build_subsolution(params, n);

    double m_env = 10.0 * std::max({1.0, y0.sup_norm(), sub.c_y});
    std::string last_failure;
    for (int attempt = 0; attempt < 60; ++attempt, m_env *= 2.0) {
        SupersolutionConfig cfg{theta, m_env};
        std::optional<PairWithDeriv> super;
        try {
            super.emplace(build_supersolution(params, cfg, n));
        } catch (const ConstructionError& e) {
            last_failure = e.what();
            continue;
        }
        bool ok = true;
        for (int k = 0; k <= n && ok; ++k) {
            const double a = super->x[k];
            const double b = super->y[k];
            const double y0k = b - m_env;
            if (b <= 0.0) {
                last_failure = "B not positive";
                ok = false;
            } else if (!(theta > params.beta * a * y0k / (m_env * b))) {
                last_failure = "inequality on theta vs beta*A*y0/(M(M+y0)) fails";
                ok = false;
            } else if (!(0.0 > -gamma_mean + params.sigma * a / m_env +
                                   params.sigma * a * (1.0 / b - 1.0 / m_env) +
                                   params.epsilon / b)) {
                last_failure = "volume inequality fails";
                ok = false;
            } else if (!(a > sub.c_x) || !(b > sub.c_y)) {
                last_failure = "envelope ordering fails";
                ok = false;
            }
        }
        if (ok)
            return cfg;
    }
    throw ConstructionError(
        "select_theta_m: no admissible M_env after 60 doublings (last failure: " + last_failure +
        "); indicates a quadrature or data problem since D > 0 guarantees existence");
}

Envelope build_envelope(const ModelParams& params, const Subsolution& sub,
                        const SupersolutionConfig& cfg, int n) {
    PairWithDeriv lower{GridFunction::constant(params.period, n, sub.c_x),
                        GridFunction::constant(params.period, n, sub.c_y),
                        GridFunction::zeros(params.period, n),
                        GridFunction::zeros(params.period, n)};
    PairWithDeriv upper = build_supersolution(params, cfg, n);
    return {std::move(lower), std::move(upper)};
}

CellSolveResult solve_cell_model(const ModelParams& params, const SolverConfig& cfg) {
    validate(params, cfg.grid_n);
    const double d = necessary_condition(params, cfg.grid_n);
    if (d <= 0.0)
        throw ConditionViolated(
            "solve_cell_model: beta*mean(gamma) - sigma*mean(alpha) = " + std::to_string(d) +
            " <= 0; the integral identity (epsilon*beta/p) int 1/y > 0 rules out any positive "
            "periodic solution");

    const Subsolution sub = build_subsolution(params, cfg.grid_n);
    const SupersolutionConfig super_cfg = select_theta_m(params, cfg.grid_n);
    Envelope env = build_envelope(params, sub, super_cfg, cfg.grid_n);
    const CooperativeSystem sys = make_system(params);

    CellSolveResult result{d,
                           mean_decompose(params.alpha, cfg.grid_n).first,
                           mean_decompose(params.gamma, cfg.grid_n).first,
                           sub,
                           super_cfg,
                           verify_cooperative(sys, env, cfg.samples),
                           verify_subsolution(sys, env.sub),
                           verify_supersolution(sys, env.super),
                           IterationReport{env.sub.x, env.sub.y, env.super.x, env.super.y},
                           0.0,
                           0.0,
                           false};
    if (!result.cooperativity.pass)
        throw ConstructionError("solve_cell_model: cooperativity check failed: " +
                                result.cooperativity.detail);
    if (!result.sub_check.pass)
        throw ConstructionError("solve_cell_model: subsolution check failed: " +
                                result.sub_check.detail);
    if (!result.super_check.pass)
        throw ConstructionError("solve_cell_model: supersolution check failed: " +
                                result.super_check.detail);

    MonotoneConfig mono;
    mono.M_override = cfg.M_override;
    mono.tol_step = cfg.tol_step;
    mono.tol_unique = cfg.tol_unique;
    mono.max_iter = cfg.max_iter;
    mono.samples = cfg.samples;
    result.iteration = run_monotone(sys, env, mono);

    result.identity_minimal = identity_residual(params, result.iteration.minimal_y);
    result.identity_maximal = identity_residual(params, result.iteration.maximal_y);
    const double scale = 1.0 + std::max(env.super.x.sup_norm(), env.super.y.sup_norm());
    const double between = result.iteration.chain_gaps.empty()
                               ? 0.0
                               : result.iteration.chain_gaps.back().between;
    result.unique = result.iteration.converged && between <= cfg.tol_unique * scale;
    return result;
}

} // namespace cellflux
