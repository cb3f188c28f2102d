#pragma once

#include <stdexcept>
#include <string>

namespace cellflux {

/// Malformed or inconsistent user configuration (bad grid size, missing field).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (a <= 0, y <= 0, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// y' = b(t) has no periodic solution because the forcing mean is nonzero.
struct PeriodicityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The periodic Green's kernel 1 - e^{-ap} underflowed; the a -> 0 scaling
/// regime applies instead.
struct NearSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A sub/supersolution construction failed (e.g. the supersolution envelope
/// could not be made positive or ordered).
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The existence condition beta*mean(gamma) - sigma*mean(alpha) > 0 fails;
/// no positive periodic solution exists.
struct ConditionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Chain ordering broke beyond roundoff during the monotone iteration;
/// indicates M too small or an invalid envelope.
struct MonotonicityBreach : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An initial-value integration approached the y = 0 singularity.
struct SingularityApproached : std::runtime_error {
    SingularityApproached(const std::string& msg, double t, double x, double y)
        : std::runtime_error(msg), t(t), x(x), y(y) {}
    double t;  ///< last safe time
    double x;  ///< last safe state
    double y;
};

} // namespace cellflux
