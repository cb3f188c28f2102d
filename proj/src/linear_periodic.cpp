#include "cellflux/linear_periodic.hpp"

#include <array>
#include <cmath>

namespace cellflux {

namespace {

// Moments J_m = int_0^h e^{-a(h-u)} u^m du for m = 0..3. The upward recursion
// J_m = (h^m - m J_{m-1})/a cancels badly when a*h is small, so a truncated
// series in (-a) takes over below a*h = 1.
std::array<double, 4> exp_moments(double a, double h) {
    std::array<double, 4> j{};
    if (a * h < 1.0) {
        for (int m = 0; m < 4; ++m) {
            double term = std::pow(h, m + 1) / (m + 1); // h^{m+1} * m! / (m+1)!
            // term_k = (-a)^k h^{m+k+1} m! / (m+k+1)!
            double sum = 0.0;
            for (int k = 0; k < 64; ++k) {
                sum += term;
                term *= -a * h / (m + k + 2);
                if (std::abs(term) < 1e-18 * std::abs(sum))
                    break;
            }
            j[m] = sum;
        }
    } else {
        j[0] = -std::expm1(-a * h) / a;
        double hp = 1.0;
        for (int m = 1; m < 4; ++m) {
            hp *= h;
            j[m] = (hp - m * j[m - 1]) / a;
        }
    }
    return j;
}

// Weights of the exponential integrator step
//   P_k = int_{t_k}^{t_{k+1}} e^{-a(t_{k+1}-s)} b(s) ds
// with b replaced by its cubic interpolant through nodes k-1, k, k+1, k+2.
std::array<double, 4> step_weights(double a, double h) {
    const auto j = exp_moments(a, h);
    const double h2 = h * h, h3 = h2 * h;
    // Lagrange basis polynomials on u in [0,h], nodes at u = -h, 0, h, 2h,
    // expanded in monomials c0 + c1 u + c2 u^2 + c3 u^3.
    const double l[4][4] = {
        {0.0, -1.0 / (3.0 * h), 1.0 / (2.0 * h2), -1.0 / (6.0 * h3)},
        {1.0, -1.0 / (2.0 * h), -1.0 / h2, 1.0 / (2.0 * h3)},
        {0.0, 1.0 / h, 1.0 / (2.0 * h2), -1.0 / (2.0 * h3)},
        {0.0, -1.0 / (6.0 * h), 0.0, 1.0 / (6.0 * h3)},
    };
    std::array<double, 4> w{};
    for (int i = 0; i < 4; ++i)
        for (int m = 0; m < 4; ++m)
            w[i] += l[i][m] * j[m];
    return w;
}

void check_problem(const LinearPeriodicProblem& prob) {
    if (prob.decay <= 0.0)
        throw DomainError("linear_periodic: decay rate a must be positive (a = " +
                          std::to_string(prob.decay) + "); a = 0 is the zero-mean-primitive case");
    const double denom = -std::expm1(-prob.decay * prob.forcing.period());
    if (denom < 1e-300)
        throw NearSingular("linear_periodic: 1 - e^{-ap} underflowed; the a -> 0 "
                           "scaling a*y -> mean(b) applies");
}

} // namespace

GridFunction solve_linear_periodic(const LinearPeriodicProblem& prob) {
    check_problem(prob);
    const GridFunction& b = prob.forcing;
    const double a = prob.decay;
    const int n = b.n();
    const double p = b.period();
    const double h = b.spacing();
    const double d = std::exp(-a * h);
    const auto w = step_weights(a, h);
    auto at = [&](int k) { return b[((k % n) + n) % n]; };

    // First sweep: I_k = int_0^{t_k} e^{-a(t_k - s)} b(s) ds.
    std::vector<double> partial(static_cast<size_t>(n) + 1);
    partial[0] = 0.0;
    std::vector<double> local(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        local[k] = w[0] * at(k - 1) + w[1] * at(k) + w[2] * at(k + 1) + w[3] * at(k + 2);
        partial[k + 1] = d * partial[k] + local[k];
    }
    const double y0 = partial[n] / -std::expm1(-a * p);

    // Second sweep: y_{k+1} = e^{-ah} y_k + P_k, closed by periodicity.
    std::vector<double> y(static_cast<size_t>(n) + 1);
    y[0] = y0;
    for (int k = 0; k < n; ++k)
        y[k + 1] = d * y[k] + local[k];
    y[n] = y[0];
    return GridFunction(p, std::move(y));
}

GridFunction solve_linear_periodic(double decay, const GridFunction& forcing) {
    return solve_linear_periodic(LinearPeriodicProblem{decay, forcing});
}

DecayTrajectory decay_to_periodic(const LinearPeriodicProblem& prob, double y_init,
                                  int horizon_periods) {
    check_problem(prob);
    const GridFunction& b = prob.forcing;
    const double a = prob.decay;
    const int n = b.n();
    const double h = b.spacing();
    const double d = std::exp(-a * h);
    const auto w = step_weights(a, h);
    auto at = [&](int k) { return b[((k % n) + n) % n]; };

    const GridFunction periodic = solve_linear_periodic(prob);

    DecayTrajectory out;
    out.periodic_start = periodic[0];
    out.times.reserve(static_cast<size_t>(horizon_periods) * n + 1);
    out.values.reserve(out.times.capacity());
    double y = y_init;
    out.times.push_back(0.0);
    out.values.push_back(y);
    out.period_gaps.push_back(std::abs(y - periodic[0]));
    for (int period = 0; period < horizon_periods; ++period) {
        for (int k = 0; k < n; ++k) {
            const double local =
                w[0] * at(k - 1) + w[1] * at(k) + w[2] * at(k + 1) + w[3] * at(k + 2);
            y = d * y + local;
            out.times.push_back((period + static_cast<double>(k + 1) / n) * b.period());
            out.values.push_back(y);
        }
        out.period_gaps.push_back(std::abs(y - periodic[0]));
    }
    return out;
}

std::vector<double> scaled_small_a_limit(const PeriodicForcing& b,
                                         std::span<const double> a_sequence, int n) {
    const GridFunction grid = sample(b, n);
    const double mean = integrate_period(grid) / grid.period();
    std::vector<double> deviations;
    deviations.reserve(a_sequence.size());
    for (double a : a_sequence) {
        const GridFunction y = solve_linear_periodic(a, grid);
        double dev = 0.0;
        for (double v : y.values())
            dev = std::max(dev, std::abs(a * v - mean));
        deviations.push_back(dev);
    }
    return deviations;
}

} // namespace cellflux
