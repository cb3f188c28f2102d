#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cellflux/linear_periodic.hpp"
#include "cellflux/periodic.hpp"

namespace cellflux {

/// A two-component p-periodic system x' = f(t,x,y), y' = g(t,x,y) with
/// analytic partial derivatives. Cooperativity (f_y >= 0, g_x >= 0 on the
/// working box) is what makes the monotone iteration order-preserving.
struct CooperativeSystem {
    double period;
    std::function<double(double, double, double)> f, g;
    std::function<double(double, double, double)> f_x, f_y, g_x, g_y;
};

/// A periodic function pair together with its exact derivative pair, as
/// produced by the sub/supersolution constructions and by each iteration step.
struct PairWithDeriv {
    GridFunction x, y;
    GridFunction dx, dy;
};

/// Ordered sub/supersolution envelope: sub < super strictly at every node.
struct Envelope {
    PairWithDeriv sub;
    PairWithDeriv super;
};

struct VerifyReport {
    bool pass = false;
    double worst = 0.0; ///< worst margin found (sign convention per check)
    double witness_t = 0.0, witness_x = 0.0, witness_y = 0.0;
    std::string detail;
};

/// Check f_y >= 0 and g_x >= 0 on a samples x samples lattice inside the
/// envelope box at every grid node; reports the minimum value found.
VerifyReport verify_cooperative(const CooperativeSystem& sys, const Envelope& env, int samples);

/// Differential inequality check a' <= f(t,a,b), b' <= g(t,a,b) at every node
/// (slack 1e-10 * scale). worst = max node excess; negative worst means strict.
VerifyReport verify_subsolution(const CooperativeSystem& sys, const PairWithDeriv& pair);
VerifyReport verify_supersolution(const CooperativeSystem& sys, const PairWithDeriv& pair);

/// The iteration decay constant: M = 1.05 * max(0, max_box(-f_x), max_box(-g_y)) + 0.01
/// over the sampled box, which makes Mx + f and My + g nondecreasing in the
/// own variable there (cross-monotonicity comes free from cooperativity).
double choose_M(const CooperativeSystem& sys, const Envelope& env, int samples);

/// Per-component decay constants computed by the same rule; the engine uses
/// these internally so the slow component is not penalized by the fast one.
struct DecayRates {
    double m_x, m_y;
};
DecayRates choose_decay_rates(const CooperativeSystem& sys, const PairWithDeriv& lo,
                              const PairWithDeriv& hi, int samples);

/// One monotone-iteration step: each component is the periodic solution of
/// z' + M z = M z_prev + rhs(t, prev). Returns the new pair with its exact
/// derivatives (recovered from the solved ODE, not by differencing).
PairWithDeriv iterate_once(const CooperativeSystem& sys, double m, const PairWithDeriv& current);
PairWithDeriv iterate_once(const CooperativeSystem& sys, DecayRates m, const PairWithDeriv& current);

struct MonotoneConfig {
    std::optional<double> M_override; ///< fixed single M, disables refresh
    double tol_step = 1e-9;           ///< relative; consecutive-iterate stop
    double tol_unique = 1e-7;         ///< relative; min/max coincidence certificate
    int max_iter = 5000;
    int samples = 33;         ///< lattice for the initial M selection
    int refresh_samples = 5;  ///< lattice for refresh passes (endpoints included)
    int refresh_every = 10;   ///< re-derive decay rates from the shrinking chain box
    bool refresh = true;
};

struct IterationGaps {
    double ascending;  ///< sup gap vs previous ascending iterate
    double descending; ///< sup gap vs previous descending iterate
    double between;    ///< sup gap ascending vs descending
};

struct IterationReport {
    GridFunction minimal_x, minimal_y;
    GridFunction maximal_x, maximal_y;
    int iterations = 0;
    std::vector<IterationGaps> chain_gaps;
    double M_used = 0.0; ///< last (largest-scope) decay constant in effect
    bool converged = false;
    double residual_minimal = 0.0; ///< sup |z' - rhs| of the minimal solution
    double residual_maximal = 0.0;
};

struct NonConvergence : std::runtime_error {
    NonConvergence(const std::string& msg, IterationReport partial)
        : std::runtime_error(msg), report(std::move(partial)) {}
    IterationReport report;
};

/// Run the ascending chain from the subsolution and the descending chain from
/// the supersolution until both consecutive gaps drop below tol_step * scale.
/// Chain ordering sub <= x_n <= X_n <= super is enforced every iteration:
/// violations within 1e-7 are clamped as discretization noise, larger ones
/// raise MonotonicityBreach. Exceeding max_iter raises NonConvergence with
/// the partial report.
IterationReport run_monotone(const CooperativeSystem& sys, const Envelope& env,
                             const MonotoneConfig& cfg = {});

} // namespace cellflux
