#include <cmath>
#include <numbers>
#include <random>

#include "cellflux/cell_model.hpp"
#include "doctest.h"

using namespace cellflux;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams demo_params() {
    return {PeriodicForcing::sinusoid(1.0, 2.0, 1.0, 2.0 * kPi),
            PeriodicForcing::raised_cos2(1.0, 1.0, 1.0, 2.0 * kPi),
            2.0, 1.0, 0.2, 1.0};
}

ModelParams autonomous_params(double a0 = 2.0, double g0 = 2.0) {
    return {PeriodicForcing::constant(1.0, a0), PeriodicForcing::constant(1.0, g0),
            2.0, 1.0, 0.2, 1.0};
}

} // namespace

TEST_CASE("validate") {
    CHECK_NOTHROW(validate(demo_params(), 64));
    SUBCASE("nonpositive constants rejected") {
        ModelParams p = demo_params();
        p.epsilon = 0.0;
        CHECK_THROWS_AS(validate(p, 64), ConfigError);
        p = demo_params();
        p.beta = -1.0;
        CHECK_THROWS_AS(validate(p, 64), ConfigError);
    }
    SUBCASE("forcing dipping nonpositive rejected") {
        ModelParams p = demo_params();
        p.alpha = PeriodicForcing::sinusoid(1.0, 1.0, 2.0, 2.0 * kPi); // min = -1
        CHECK_THROWS_AS(validate(p, 64), ConfigError);
    }
    SUBCASE("period mismatch rejected") {
        ModelParams p = demo_params();
        p.period = 2.0;
        CHECK_THROWS_AS(validate(p, 64), ConfigError);
    }
}

TEST_CASE("rhs and partial derivatives") {
    const ModelParams p = demo_params();
    SUBCASE("values at a sample point") {
        auto v = rhs(p, 0.25, 1.0, 0.5);
        CHECK(v.f == doctest::Approx(3.0 - 2.0 * 2.0));         // alpha(1/4)=3
        CHECK(v.g == doctest::Approx(-1.0 + 2.0 + 0.4));        // gamma(1/4)=1
        CHECK(v.f_x == doctest::Approx(-4.0));
        CHECK(v.f_y == doctest::Approx(8.0));
        CHECK(v.g_x == doctest::Approx(2.0));
        CHECK(v.g_y == doctest::Approx(-(1.0 + 0.2) / 0.25));
    }
    SUBCASE("partials match finite differences") {
        const double t = 0.37, x = 1.3, y = 0.8, h = 1e-6;
        auto v = rhs(p, t, x, y);
        CHECK(v.f_x == doctest::Approx((rhs(p, t, x + h, y).f - rhs(p, t, x - h, y).f) / (2 * h))
                           .epsilon(1e-5));
        CHECK(v.f_y == doctest::Approx((rhs(p, t, x, y + h).f - rhs(p, t, x, y - h).f) / (2 * h))
                           .epsilon(1e-5));
        CHECK(v.g_x == doctest::Approx((rhs(p, t, x + h, y).g - rhs(p, t, x - h, y).g) / (2 * h))
                           .epsilon(1e-5));
        CHECK(v.g_y == doctest::Approx((rhs(p, t, x, y + h).g - rhs(p, t, x, y - h).g) / (2 * h))
                           .epsilon(1e-5));
    }
    SUBCASE("singular domain rejected") {
        CHECK_THROWS_AS(rhs(p, 0.0, 1.0, 0.0), DomainError);
        CHECK_THROWS_AS(rhs(p, 0.0, 1.0, -0.5), DomainError);
    }
    SUBCASE("system wrapper is periodic in t") {
        const CooperativeSystem sys = make_system(p);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.1, 3.0);
        for (int i = 0; i < 16; ++i) {
            const double t = u(rng), x = u(rng), y = u(rng);
            CHECK(sys.f(t, x, y) == doctest::Approx(sys.f(t + 1.0, x, y)).epsilon(1e-10));
            CHECK(sys.g(t, x, y) == doctest::Approx(sys.g(t + 1.0, x, y)).epsilon(1e-10));
        }
    }
}

TEST_CASE("necessary_condition") {
    SUBCASE("demo value is exactly 1") {
        CHECK(necessary_condition(demo_params(), 2048) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("sign flips when sigma grows") {
        ModelParams p = demo_params();
        p.sigma = 4.0;
        CHECK(necessary_condition(p, 256) == doctest::Approx(-5.0).epsilon(1e-9));
    }
    SUBCASE("balanced case is zero") {
        // sigma * mean(alpha) = beta * mean(gamma): sigma = 3/2
        ModelParams p = demo_params();
        p.sigma = 1.5;
        CHECK(std::abs(necessary_condition(p, 512)) < 1e-9);
    }
}

TEST_CASE("identity_residual") {
    const ModelParams p = autonomous_params();
    SUBCASE("exact on the equilibrium") {
        // y* = 0.2 gives (eps*beta/p) * 1/y* = 0.2*2/0.2 = 2 = D
        auto y = GridFunction::constant(1.0, 64, 0.2);
        CHECK(identity_residual(p, y) < 1e-12);
    }
    SUBCASE("O(1) on a non-solution") {
        auto y = GridFunction::constant(1.0, 64, 1.0);
        CHECK(identity_residual(p, y) == doctest::Approx(2.0 - 0.4));
    }
    SUBCASE("rejects nonpositive y") {
        CHECK_THROWS_AS(identity_residual(p, GridFunction::constant(1.0, 64, -1.0)), DomainError);
    }
}

TEST_CASE("build_subsolution") {
    SUBCASE("demo constants carry strict margins") {
        auto sub = build_subsolution(demo_params(), 256);
        CHECK(sub.c_x > 0.0);
        CHECK(sub.c_y > 0.0);
        CHECK(sub.margin_x > 0.0);
        CHECK(sub.margin_y > 0.0);
        // ratio rule: beta * c_x / c_y = alpha_min / 2
        CHECK(2.0 * sub.c_x / sub.c_y == doctest::Approx(0.5));
    }
    SUBCASE("verified as a subsolution for random draws") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int draws = 0, tried = 0;
        while (draws < 15 && tried < 300) {
            ++tried;
            ModelParams p{PeriodicForcing::sinusoid(1.0, 0.5 + 2.5 * u(rng), 0.0, 0.0),
                          PeriodicForcing::sinusoid(1.0, 0.5 + 2.5 * u(rng), 0.0, 0.0),
                          0.5 + 3.0 * u(rng), 0.2 + 2.0 * u(rng), 0.05 + u(rng), 1.0};
            // add genuine oscillation
            p.alpha = PeriodicForcing::sinusoid(1.0, p.alpha(0.0), 0.5 * p.alpha(0.0) * u(rng),
                                                2.0 * kPi);
            ++draws;
            auto sub = build_subsolution(p, 128);
            PairWithDeriv pair{GridFunction::constant(1.0, 128, sub.c_x),
                               GridFunction::constant(1.0, 128, sub.c_y),
                               GridFunction::zeros(1.0, 128), GridFunction::zeros(1.0, 128)};
            CHECK(verify_subsolution(make_system(p), pair).pass);
        }
        CHECK(draws == 15);
    }
}

TEST_CASE("build_supersolution / select_theta_m") {
    const ModelParams p = demo_params();
    SUBCASE("demo theta is D/(2 sigma) = 0.5") {
        auto cfg = select_theta_m(p, 512);
        CHECK(cfg.theta == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(cfg.m_env >= 10.0);
    }
    SUBCASE("selected configuration verifies as a supersolution") {
        auto cfg = select_theta_m(p, 512);
        auto super = build_supersolution(p, cfg, 512);
        CHECK(verify_supersolution(make_system(p), super).pass);
        CHECK(super.y.min() > 0.0);
    }
    SUBCASE("rejects nonpositive parameters") {
        CHECK_THROWS_AS(build_supersolution(p, {0.0, 10.0}, 64), ConstructionError);
        CHECK_THROWS_AS(build_supersolution(p, {0.5, -1.0}, 64), ConstructionError);
    }
    SUBCASE("m_env below sup|y0| rejected") {
        CHECK_THROWS_AS(build_supersolution(p, {0.5, 1e-6}, 64), ConstructionError);
    }
    SUBCASE("D <= 0 rejected") {
        ModelParams q = p;
        q.sigma = 4.0;
        CHECK_THROWS_AS(select_theta_m(q, 128), ConditionViolated);
    }
    SUBCASE("growing epsilon never blocks selection") {
        for (double eps : {0.2, 2.0, 20.0}) {
            ModelParams q = p;
            q.epsilon = eps;
            CHECK_NOTHROW(select_theta_m(q, 256));
        }
    }
}

TEST_CASE("solve_cell_model") {
    SUBCASE("demo pipeline: converged, unique, certified") {
        SolverConfig cfg;
        cfg.grid_n = 1024;
        auto r = solve_cell_model(demo_params(), cfg);
        CHECK(r.condition == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.alpha_mean == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(r.gamma_mean == doctest::Approx(1.5).epsilon(1e-9));
        CHECK(r.cooperativity.pass);
        CHECK(r.sub_check.pass);
        CHECK(r.super_check.pass);
        CHECK(r.iteration.converged);
        CHECK(r.unique);
        CHECK(r.identity_minimal < 1e-6);
        CHECK(r.identity_maximal < 1e-6);
        CHECK(r.iteration.minimal_y.min() > 0.0);
    }
    SUBCASE("autonomous oracle (0.2, 0.2)") {
        SolverConfig cfg;
        cfg.grid_n = 256;
        auto r = solve_cell_model(autonomous_params(), cfg);
        CHECK(r.iteration.converged);
        CHECK(sup_diff(r.iteration.minimal_x, GridFunction::constant(1.0, 256, 0.2)) < 1e-7);
        CHECK(sup_diff(r.iteration.minimal_y, GridFunction::constant(1.0, 256, 0.2)) < 1e-7);
    }
    SUBCASE("random autonomous draws match the closed-form equilibrium") {
        std::mt19937_64 rng(777);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int done = 0, tried = 0;
        double worst = 0.0;
        while (done < 20 && tried < 500) {
            ++tried;
            const double beta = 0.5 + 3.0 * u(rng), sigma = 0.2 + 2.0 * u(rng),
                         eps = 0.05 + u(rng);
            const double a0 = 0.5 + 2.5 * u(rng), g0 = 0.5 + 2.5 * u(rng);
            const double d = beta * g0 - sigma * a0;
            if (d <= 0.05)
                continue;
            ++done;
            ModelParams p{PeriodicForcing::constant(1.0, a0), PeriodicForcing::constant(1.0, g0),
                          beta, sigma, eps, 1.0};
            SolverConfig cfg;
            cfg.grid_n = 256;
            cfg.max_iter = 20000;
            auto r = solve_cell_model(p, cfg);
            const double ys = eps * beta / d;
            const double xs = a0 / beta * ys;
            worst = std::max(worst,
                             std::max(sup_diff(r.iteration.minimal_x,
                                               GridFunction::constant(1.0, 256, xs)),
                                      sup_diff(r.iteration.minimal_y,
                                               GridFunction::constant(1.0, 256, ys))));
        }
        CHECK(done == 20);
        CHECK(worst < 1e-8);
    }
    SUBCASE("D <= 0 raises ConditionViolated") {
        ModelParams p = demo_params();
        p.sigma = 4.0;
        CHECK_THROWS_AS(solve_cell_model(p), ConditionViolated);
    }
    SUBCASE("identity residual shrinks under grid refinement") {
        SolverConfig coarse, fine;
        coarse.grid_n = 128;
        fine.grid_n = 512;
        auto rc = solve_cell_model(demo_params(), coarse);
        auto rf = solve_cell_model(demo_params(), fine);
        CHECK(rf.identity_minimal < rc.identity_minimal);
    }
}
