"""
Damped Newton solver for the implicit node solves.

Full Newton steps, halved (up to MAX_HALVINGS times) while the step would
increase the ∞-norm of the residual.
"""

from logging import getLogger
from typing import Callable, Union

import numpy as np

from ..errors import NewtonConvergenceError
from .banded import BandedMatrix, lu_factor

logger = getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 50
MAX_HALVINGS = 8

VectorFunction = Callable[[np.ndarray], np.ndarray]
MatrixFunction = Callable[[np.ndarray], Union[BandedMatrix, np.ndarray]]


def _inf_norm(r: np.ndarray) -> float:
    return float(np.max(np.abs(r))) if r.size else 0.0


def newton_solve(
    residual: VectorFunction,
    jacobian: MatrixFunction,
    u0: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """
    Solve residual(u) = 0 by Newton's method.

    Args:
        residual: Vector function r(u)
        jacobian: Returns dr/du at u, as BandedMatrix or dense ndarray
        u0: Start iterate (not modified)
        tol: Absolute ∞-norm tolerance on the residual
        max_iter: Maximum number of Newton steps

    Returns:
        u with ||residual(u)||_inf <= tol

    Raises:
        NewtonConvergenceError: tolerance not met within max_iter steps, or
            the iterate became non-finite
        SingularMatrixError: propagated from lu_factor
    """
    if tol <= 0:
        raise ValueError(f"Newton tolerance must be positive, got {tol}")

    u = np.array(np.atleast_1d(u0), dtype=float)
    r = np.atleast_1d(residual(u))
    r_norm = _inf_norm(r)

    for iteration in range(max_iter + 1):
        if not np.isfinite(r_norm):
            raise NewtonConvergenceError(
                f"Non-finite residual after {iteration} Newton steps",
                iterations=iteration,
                residual_norm=r_norm,
            )
        if r_norm <= tol:
            logger.debug(f"Newton converged in {iteration} steps, |r| = {r_norm:.3e}")
            return u
        if iteration == max_iter:
            break

        step = lu_factor(jacobian(u)).solve(-r)
        damping = 1.0
        u_trial = u + step
        r_trial = np.atleast_1d(residual(u_trial))
        trial_norm = _inf_norm(r_trial)
        halvings = 0
        while not (trial_norm <= r_norm) and halvings < MAX_HALVINGS:
            damping *= 0.5
            halvings += 1
            u_trial = u + damping * step
            r_trial = np.atleast_1d(residual(u_trial))
            trial_norm = _inf_norm(r_trial)
        if halvings:
            logger.debug(f"Newton step {iteration}: damped by {damping:g}")

        u, r, r_norm = u_trial, r_trial, trial_norm

    raise NewtonConvergenceError(
        f"Newton did not converge in {max_iter} steps (|r| = {r_norm:.3e}, tol = {tol:.1e})",
        iterations=max_iter,
        residual_norm=r_norm,
    )
