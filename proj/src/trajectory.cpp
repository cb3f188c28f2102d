#include "cellflux/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace cellflux {

namespace {

struct State {
    double x, y;
};

State eval_rhs(const ModelParams& params, double t, State s) {
    const RhsValue v = rhs(params, t, s.x, s.y);
    return {v.f, v.g};
}

} // namespace

Trajectory integrate(const ModelParams& params, double x0, double y0, double step,
                     int horizon_periods, double y_floor) {
    if (y0 <= 0.0)
        throw DomainError("integrate: initial y must be positive");
    if (step <= 0.0 || step > params.period / 100.0)
        throw ConfigError("integrate: step must be positive and at most period/100");
    if (horizon_periods < 1)
        throw ConfigError("integrate: horizon must be at least one period");
    const int steps_per_period = static_cast<int>(std::llround(params.period / step));
    const double h = params.period / steps_per_period;
    const long total = static_cast<long>(steps_per_period) * horizon_periods;

    Trajectory traj;
    traj.step = h;
    traj.times.reserve(total + 1);
    traj.x.reserve(total + 1);
    traj.y.reserve(total + 1);

    State s{x0, y0};
    traj.times.push_back(0.0);
    traj.x.push_back(s.x);
    traj.y.push_back(s.y);

    for (long i = 0; i < total; ++i) {
        const double t = i * h;
        try {
            const State k1 = eval_rhs(params, t, s);
            const State s2{s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y};
            const State k2 = eval_rhs(params, t + 0.5 * h, s2);
            const State s3{s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y};
            const State k3 = eval_rhs(params, t + 0.5 * h, s3);
            const State s4{s.x + h * k3.x, s.y + h * k3.y};
            const State k4 = eval_rhs(params, t + h, s4);
            s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
            s.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
        } catch (const DomainError&) {
            throw SingularityApproached("integrate: y crossed zero during a step at t = " +
                                            std::to_string(t),
                                        traj.times.back(), traj.x.back(), traj.y.back());
        }
        if (s.y <= y_floor)
            throw SingularityApproached("integrate: y reached the floor " +
                                            std::to_string(y_floor) + " at t = " +
                                            std::to_string(t + h),
                                        traj.times.back(), traj.x.back(), traj.y.back());
        traj.times.push_back((i + 1) * h);
        traj.x.push_back(s.x);
        traj.y.push_back(s.y);
    }
    return traj;
}

AttractionReport attraction_metrics(const Trajectory& traj, const GridFunction& periodic_x,
                                    const GridFunction& periodic_y, double attraction_tol) {
    const double p = periodic_x.period();
    const double total_time = traj.times.back();
    const int windows = static_cast<int>(std::floor(total_time / p + 1e-9));
    if (windows < 4)
        throw DomainError("attraction_metrics: trajectory must span at least 4 periods");

    AttractionReport report;
    report.distances.reserve(windows);
    size_t i = 0;
    for (int k = 0; k < windows; ++k) {
        const double t_end = (k + 1) * p;
        double dx = 0.0, dy = 0.0;
        while (i < traj.times.size() && traj.times[i] <= t_end + 0.5 * traj.step) {
            const double t = traj.times[i];
            dx = std::max(dx, std::abs(traj.x[i] - periodic_x(t)));
            dy = std::max(dy, std::abs(traj.y[i] - periodic_y(t)));
            ++i;
        }
        --i; // window boundary sample belongs to both windows
        report.distances.push_back(dx + dy);
    }
    const double floor = attraction_tol / 10.0;
    bool contracting = true;
    for (size_t k = 0; k + 1 < report.distances.size(); ++k) {
        const double next = report.distances[k + 1];
        report.ratios.push_back(next / std::max(report.distances[k], 1e-300));
        if (k + 4 >= report.distances.size() && !(next < report.distances[k] || next <= floor))
            contracting = false;
    }
    report.pass = contracting && report.distances.back() <= attraction_tol;
    return report;
}

} // namespace cellflux
