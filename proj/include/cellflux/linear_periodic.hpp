#pragma once

#include <span>
#include <vector>

#include "cellflux/periodic.hpp"

namespace cellflux {

/// y' + a*y = b(t) with decay rate a > 0 and p-periodic forcing b.
/// a = 0 has no unique periodic solution; that case is zero_mean_primitive's.
struct LinearPeriodicProblem {
    double decay; ///< a > 0, units 1/time
    GridFunction forcing;
};

/// The unique p-periodic solution, evaluated through the overflow-safe
/// Green's-function form (never touches e^{+ap}); two O(N) recurrence sweeps.
/// Throws DomainError for a <= 0 and NearSingular if 1 - e^{-ap} underflows.
GridFunction solve_linear_periodic(const LinearPeriodicProblem& prob);
GridFunction solve_linear_periodic(double decay, const GridFunction& forcing);

/// A forward-integrated scalar solution with per-period gaps against the
/// periodic solution; the gap decays exactly like e^{-a k p}.
struct DecayTrajectory {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> period_gaps; ///< |y(kp) - y_periodic(0)|, k = 0..horizon
    double periodic_start;           ///< y_periodic(0)
};

DecayTrajectory decay_to_periodic(const LinearPeriodicProblem& prob, double y_init,
                                  int horizon_periods);

/// sup_t |a*y_a(t) - mean(b)| for each decay rate in the sequence. By the
/// small-a limit of the periodic solution these deviations vanish as a -> 0.
std::vector<double> scaled_small_a_limit(const PeriodicForcing& b,
                                         std::span<const double> a_sequence, int n);

} // namespace cellflux
