#include <cmath>
#include <numbers>
#include <vector>

#include "cellflux/linear_periodic.hpp"
#include "doctest.h"

using namespace cellflux;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("solve_linear_periodic oracles") {
    SUBCASE("constant forcing gives the equilibrium b/a") {
        auto y = solve_linear_periodic(2.0, GridFunction::constant(1.0, 16, 3.0));
        for (int k = 0; k <= 16; ++k)
            CHECK(y[k] == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("a=1, b=sin t, p=2pi matches (sin t - cos t)/2") {
        auto b = sample(PeriodicForcing::sinusoid(2.0 * kPi, 0.0, 1.0, 1.0), 2048);
        auto y = solve_linear_periodic(1.0, b);
        double worst = 0.0;
        for (int k = 0; k <= 2048; ++k) {
            const double t = 2.0 * kPi * k / 2048;
            worst = std::max(worst, std::abs(y[k] - 0.5 * (std::sin(t) - std::cos(t))));
        }
        CHECK(worst < 1e-8);
    }
    SUBCASE("general sinusoid closed form") {
        // y' + ay = c0 + c1 sin(wt)  =>  y = c0/a + c1 (a sin wt - w cos wt)/(a^2+w^2)
        const double a = 3.0, c0 = 2.0, c1 = 0.7, w = 2.0 * kPi;
        auto b = sample(PeriodicForcing::sinusoid(1.0, c0, c1, w), 1024);
        auto y = solve_linear_periodic(a, b);
        double worst = 0.0;
        for (int k = 0; k <= 1024; ++k) {
            const double t = k / 1024.0;
            const double exact =
                c0 / a + c1 * (a * std::sin(w * t) - w * std::cos(w * t)) / (a * a + w * w);
            worst = std::max(worst, std::abs(y[k] - exact));
        }
        CHECK(worst < 1e-10);
    }
    SUBCASE("positive forcing gives a positive solution") {
        auto b = sample(PeriodicForcing::sinusoid(1.0, 2.0, 1.0, 2.0 * kPi), 256);
        auto y = solve_linear_periodic(1.0, b);
        CHECK(y.min() > 0.0);
    }
}

TEST_CASE("solve_linear_periodic properties") {
    auto b1 = sample(PeriodicForcing::sinusoid(1.0, 1.0, 0.5, 2.0 * kPi), 512);
    auto b2 = sample(PeriodicForcing::raised_cos2(1.0, 0.3, 1.2, 2.0 * kPi), 512);

    SUBCASE("deterministic: repeated calls agree exactly") {
        auto ya = solve_linear_periodic(1.7, b1);
        auto yb = solve_linear_periodic(1.7, b1);
        CHECK(sup_diff(ya, yb) == 0.0);
    }
    SUBCASE("linearity in the forcing") {
        auto ya = solve_linear_periodic(1.7, b1);
        auto yb = solve_linear_periodic(1.7, b2);
        auto ysum = solve_linear_periodic(1.7, b1 + b2);
        CHECK(sup_diff(ysum, ya + yb) < 1e-10);
    }
    SUBCASE("residual of the ODE is small") {
        auto y = solve_linear_periodic(2.5, b2);
        auto dy = differentiate(y);
        double worst = 0.0;
        for (int k = 0; k <= 512; ++k)
            worst = std::max(worst, std::abs(dy[k] + 2.5 * y[k] - b2[k]));
        CHECK(worst < 1e-8 * (1.0 + b2.sup_norm()));
    }
    SUBCASE("matches direct Green's-function quadrature at moderate a*p") {
        // y0 = int_0^p e^{a s} b(s) ds / (e^{ap} - 1), safe here since a*p = 4
        const double a = 4.0;
        const int n = 2048;
        auto b_big = sample(PeriodicForcing::sinusoid(1.0, 1.0, 0.5, 2.0 * kPi), n);
        std::vector<double> integ(static_cast<size_t>(n) + 1);
        for (int k = 0; k <= n; ++k)
            integ[k] = std::exp(a * (static_cast<double>(k) / n)) * b_big[k];
        double simpson = 0.0;
        const double h = 1.0 / n;
        for (int k = 0; k + 2 <= n; k += 2)
            simpson += h / 3.0 * (integ[k] + 4.0 * integ[k + 1] + integ[k + 2]);
        const double y0_direct = simpson / std::expm1(a);
        auto y_big = solve_linear_periodic(a, b_big);
        CHECK(std::abs(y_big[0] - y0_direct) < 1e-9);
    }
    SUBCASE("very large a*p degrades gracefully (no overflow)") {
        auto y = solve_linear_periodic(2000.0, b1);
        CHECK(std::isfinite(y.sup_norm()));
        // stiff limit: y ~ b/a
        double worst = 0.0;
        for (int k = 0; k <= 512; ++k)
            worst = std::max(worst, std::abs(y[k] - b1[k] / 2000.0));
        CHECK(worst < 1e-5);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(solve_linear_periodic(0.0, b1), DomainError);
        CHECK_THROWS_AS(solve_linear_periodic(-1.0, b1), DomainError);
        CHECK_THROWS_AS(solve_linear_periodic(1e-320, b1), NearSingular);
    }
}

TEST_CASE("decay_to_periodic") {
    auto b = GridFunction::constant(1.0, 256, 1.0);
    LinearPeriodicProblem prob{1.0, b};

    SUBCASE("gap decays like e^{-a k p}") {
        auto traj = decay_to_periodic(prob, 5.0, 5);
        CHECK(traj.periodic_start == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(traj.period_gaps[0] == doctest::Approx(4.0));
        CHECK(traj.period_gaps[3] == doctest::Approx(4.0 * std::exp(-3.0)).epsilon(1e-6));
    }
    SUBCASE("starting on the periodic solution stays there") {
        auto traj = decay_to_periodic(prob, 1.0, 5);
        for (double gap : traj.period_gaps)
            CHECK(gap < 1e-10);
    }
    SUBCASE("doubling a halves the e-folding time") {
        auto slow = decay_to_periodic(prob, 5.0, 2);
        auto fast = decay_to_periodic(LinearPeriodicProblem{2.0, b.map([](double v) {
                                          return 2.0 * v; // keep the same equilibrium
                                      })},
                                      5.0, 1);
        CHECK(fast.period_gaps[1] == doctest::Approx(slow.period_gaps[2]).epsilon(1e-8));
    }
}

TEST_CASE("scaled small-a limit") {
    SUBCASE("constant forcing: a*y == c for every a") {
        std::vector<double> aseq{1.0, 0.1, 0.01};
        auto devs = scaled_small_a_limit(PeriodicForcing::constant(1.0, 3.0), aseq, 256);
        for (double d : devs)
            CHECK(d < 1e-9);
    }
    SUBCASE("b = 2 + sin(2 pi t): deviations decrease, final < 1e-2") {
        std::vector<double> aseq{1.0, 0.1, 0.01, 0.001};
        auto devs =
            scaled_small_a_limit(PeriodicForcing::sinusoid(1.0, 2.0, 1.0, 2.0 * kPi), aseq, 2048);
        for (size_t i = 1; i < devs.size(); ++i)
            CHECK(devs[i] < devs[i - 1]);
        CHECK(devs.back() < 1e-2);
    }
    SUBCASE("zero-mean forcing: a*y -> 0 while y stays bounded") {
        auto b = PeriodicForcing::sinusoid(1.0, 0.0, 1.0, 2.0 * kPi);
        std::vector<double> aseq{0.1, 0.01, 0.001};
        auto devs = scaled_small_a_limit(b, aseq, 1024);
        CHECK(devs.back() < 1e-3);
        // y_a itself is bounded by sup|primitive| as a -> 0
        auto y = solve_linear_periodic(0.001, sample(b, 1024));
        CHECK(y.sup_norm() < 1.0);
    }
}
