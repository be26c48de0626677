"""Sparse-gradient zeroth-order optimization."""

from ._core import (
    BudgetExhausted,
    DivisionSchedule,
    GraceConfig,
    InfeasibleParameters,
    Objective,
    ParseError,
    RngStream,
    TheoryParams,
    check_egamma,
    compute_C1,
    compute_C2,
    dependent_partition,
    falling_factorial,
    finite_difference,
    grace_estimate,
    instantiate,
    make_sparse_linear,
    minimize,
    normalize_experiment_spec,
    partition_groups,
    query_scaling_probe,
    random_permutation,
    run_experiment,
    theoretical_schedule,
    verify_schedule_conditions,
    verify_theory,
    with_ledger,
)

__all__ = [name for name in dir() if not name.startswith("_")]
