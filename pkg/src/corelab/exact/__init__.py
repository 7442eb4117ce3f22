"""Exact welfare-maximizing core outcomes and independent verifiers."""
from .core_search import (
    NO_ENVY,
    UNAFFORDABLE,
    SolveReport,
    assignment_core_feasible,
    core_constraints,
    default_max_nodes,
    max_weight_matching_value,
    solve_welfare_max_core,
)
from .fourier_motzkin import LinearConstraintSystem, lp_feasible
from .oracle import all_assignments, brute_force_oracle, core_outcomes, supportable_assignments
from .qbc import EPSILON, QbcReport, qbc_report, selection_row_holds, verify_qbc

__all__ = [
    "EPSILON",
    "NO_ENVY",
    "QbcReport",
    "UNAFFORDABLE",
    "LinearConstraintSystem",
    "SolveReport",
    "all_assignments",
    "assignment_core_feasible",
    "brute_force_oracle",
    "core_constraints",
    "core_outcomes",
    "default_max_nodes",
    "lp_feasible",
    "max_weight_matching_value",
    "qbc_report",
    "selection_row_holds",
    "solve_welfare_max_core",
    "supportable_assignments",
    "verify_qbc",
]
