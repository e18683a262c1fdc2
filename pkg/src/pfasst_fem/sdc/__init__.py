"""
SDC Package

Single-step collocation problems with a mass matrix, the SDC sweep with
backward-Euler Q_Δ, and serial time marching.

Usage:
    from src.pfasst_fem.sdc import StepProblem, run_sdc_serial

    problem = StepProblem(ops, g, g_prime, CollocationTable.radau_right(4), dt=0.5)
    u_end = run_sdc_serial(problem, u_initial, n_steps=4, k_iters=3)
"""

from .problem import Formulation, StepProblem, NodeVector
from .sweep import collocation_residual, sdc_sweep, solve_collocation, run_sdc_serial, MAX_SWEEPS

__all__ = [
    "Formulation",
    "StepProblem",
    "NodeVector",
    "collocation_residual",
    "sdc_sweep",
    "solve_collocation",
    "run_sdc_serial",
    "MAX_SWEEPS",
]
