"""
PFASST Package

Composite collocation problem over blocks of L steps, the parallel and
sequential SDC preconditioners, FAS correction and the two-level PFASST
iteration.

Usage:
    from src.pfasst_fem.pfasst import TwoLevelHierarchy, run_pfasst

    hierarchy = TwoLevelHierarchy.build(fine_problem, coarse_problem, n_steps=4)
    u_end = run_pfasst(hierarchy, u_initial, n_steps=16, k_iters=5)
"""

from .composite import (
    BlockState,
    CompositeOperator,
    composite_residual,
    sweep_parallel,
    sweep_sequential,
)
from .hierarchy import TwoLevelHierarchy, fas_tau, pfasst_iteration, run_pfasst, DEFAULT_MAX_ITERS

__all__ = [
    "BlockState",
    "CompositeOperator",
    "composite_residual",
    "sweep_parallel",
    "sweep_sequential",
    "TwoLevelHierarchy",
    "fas_tau",
    "pfasst_iteration",
    "run_pfasst",
    "DEFAULT_MAX_ITERS",
]
