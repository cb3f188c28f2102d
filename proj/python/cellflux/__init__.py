"""Periodic solutions of the cell-volume flux system by monotone iteration."""

from ._core import (  # noqa: F401
    AttractionReport,
    CellSolveResult,
    ConditionViolated,
    ConfigError,
    ConstructionError,
    GridFunction,
    IterationGaps,
    IterationReport,
    ModelDomainError,
    ModelParams,
    MonotonicityBreach,
    NearSingular,
    NonConvergenceError,
    PeriodicForcing,
    PeriodicityViolation,
    SingularityApproached,
    SolverConfig,
    Subsolution,
    SupersolutionConfig,
    Trajectory,
    attraction_metrics,
    build_subsolution,
    identity_residual,
    integrate,
    integrate_period,
    mean_decompose,
    necessary_condition,
    sample,
    scaled_small_a_limit,
    select_theta_m,
    solve_cell_model,
    solve_linear_periodic,
    zero_mean_primitive,
)

__all__ = [name for name in dir() if not name.startswith("_")]
