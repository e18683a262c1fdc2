"""
Numerics Package

Banded storage, banded LU and the damped Newton solver behind every
implicit substep.

Usage:
    from src.pfasst_fem.numerics import BandedMatrix, lu_factor, newton_solve

    A = BandedMatrix.from_dense(dense, lower_bw=1, upper_bw=1)
    x = lu_factor(A).solve(b)
"""

from .banded import BandedMatrix, Factorization, lu_factor, solve
from .newton import newton_solve, DEFAULT_TOL, DEFAULT_MAX_ITER

__all__ = [
    "BandedMatrix",
    "Factorization",
    "lu_factor",
    "solve",
    "newton_solve",
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITER",
]
