#pragma once

#include <string>
#include <vector>

#include "cellflux/cell_model.hpp"

namespace cellflux {

/// A time-stamped (t, x, y) path from an initial-value solve. Times are
/// uniform with the stored step; y stays positive at every stored state.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> x, y;
    double step = 0.0;
    std::string method = "rk4";
};

/// Classical 4th-order fixed-step integration of the flux system over
/// horizon_periods periods. The requested step is snapped to an integer
/// number of steps per period. Throws SingularityApproached (with the last
/// safe state) if y falls to y_floor.
Trajectory integrate(const ModelParams& params, double x0, double y0, double step,
                     int horizon_periods, double y_floor = 1e-9);

/// Per-period attraction diagnostics against a computed periodic solution.
/// d_k is the sum of the componentwise sup-distances over period window k;
/// the verdict requires the final distance under attraction_tol and the last
/// three windows contracting (a window already at the interpolation floor,
/// d <= attraction_tol/10, counts as contracted).
struct AttractionReport {
    std::vector<double> distances;
    std::vector<double> ratios;
    bool pass = false;
};

AttractionReport attraction_metrics(const Trajectory& traj, const GridFunction& periodic_x,
                                    const GridFunction& periodic_y,
                                    double attraction_tol = 1e-4);

} // namespace cellflux
