"""
SDC sweeps for mass-matrix collocation problems.

One sweep is the preconditioned iteration

    (I ⊗ M - Δt (Q_Δ ⊗ I) F)(U^{k+1}) = (I ⊗ M) u0 + Δt ((Q - Q_Δ) ⊗ I) F(U^k) [+ τ]

solved node by node, since the backward-Euler Q_Δ is lower triangular.
Every node solve is a Newton iteration on M u - c f(u) = rhs with
c = Δt (Q_Δ)_{mm} and a banded Jacobian M - c df/du. In the mass-inverted
formulation the node equation u - c M^-1 f(u) = rhs is solved in the
equivalent form M u - c f(u) = M rhs.
"""

from logging import getLogger
from typing import Optional

import numpy as np
from tqdm import tqdm

from ..errors import CollocationConvergenceError, NumericalError, SweepError
from ..numerics import newton_solve
from .problem import Formulation, NodeVector, StepProblem

logger = getLogger(__name__)

MAX_SWEEPS = 100


def collocation_residual(
    p: StepProblem,
    U: NodeVector,
    u0: np.ndarray,
    tau: Optional[NodeVector] = None,
) -> NodeVector:
    """
    Residual of the collocation problem, node by node.

    r_m = M U_m - Δt Σ_j Q_mj f(U_j) - M u0         (MASS)
    r_m = U_m - Δt Σ_j Q_mj M^-1 f(U_j) - u0        (MASS_INVERTED)

    An FAS correction tau, if given, is subtracted (it belongs to the
    right-hand side).
    """
    U = p.check_nodes(U)
    u0 = p.check_vector(u0, "initial value")
    residual = p.mass_nodes(U) - p.dt * (p.table.Q @ p.rhs_f_nodes(U)) - p.mass(u0)[None, :]
    if tau is not None:
        residual = residual - p.check_nodes(tau, "FAS correction")
    return residual


def _node_solve(p: StepProblem, c: float, rhs: np.ndarray, start: np.ndarray) -> np.ndarray:
    """Solve M u - c f(u) = rhs_mass for u, starting from `start`."""
    rhs_mass = rhs if p.formulation is Formulation.MASS else p.ops.mass @ rhs
    mass = p.ops.mass

    def residual(u):
        return mass @ u - c * p.f(u) - rhs_mass

    def jacobian(u):
        return mass - c * p.jacobian(u)

    return newton_solve(residual, jacobian, start, tol=p.newton_tol, max_iter=p.newton_max_iter)


def sdc_sweep(
    p: StepProblem,
    U_k: NodeVector,
    u0: np.ndarray,
    tau: Optional[NodeVector] = None,
) -> NodeVector:
    """
    One SDC sweep over the nodes of a step.

    Args:
        p: Step problem
        U_k: Current iterate, shape (M, N); not modified
        u0: Initial value of the step
        tau: Optional FAS correction added to the right-hand side

    Returns:
        New iterate U_{k+1}

    Raises:
        SweepError: a node solve failed; carries the node index
    """
    U_k = p.check_nodes(U_k, "iterate")
    u0 = p.check_vector(u0, "initial value")
    if tau is not None:
        tau = p.check_nodes(tau, "FAS correction")

    Q, QDelta = p.table.Q, p.table.QDelta
    F_old = p.rhs_f_nodes(U_k)
    explicit = p.dt * ((Q - QDelta) @ F_old)
    base = p.mass(u0)

    U_new = np.empty_like(U_k)
    F_new = np.empty_like(F_old)
    for m in range(p.n_nodes):
        rhs = base + explicit[m]
        if m:
            rhs = rhs + p.dt * (QDelta[m, :m] @ F_new[:m])
        if tau is not None:
            rhs = rhs + tau[m]
        try:
            U_new[m] = _node_solve(p, p.dt * QDelta[m, m], rhs, U_k[m])
        except NumericalError as exc:
            raise SweepError(f"Node solve failed: {exc}", node=m) from exc
        F_new[m] = p.rhs_f(U_new[m])
    return U_new


def solve_collocation(
    p: StepProblem,
    u0: np.ndarray,
    k_iters: Optional[int] = None,
    residual_tol: Optional[float] = None,
    max_sweeps: int = MAX_SWEEPS,
) -> NodeVector:
    """
    Iterate SDC sweeps from the spread initial value.

    Exactly one of k_iters (fixed number of sweeps) and residual_tol
    (sweep until ||collocation_residual||_inf <= residual_tol) must be given.

    Raises:
        CollocationConvergenceError: tolerance mode did not converge within max_sweeps
    """
    if (k_iters is None) == (residual_tol is None):
        raise ValueError("Pass exactly one of k_iters and residual_tol")
    U = p.spread(u0)

    if k_iters is not None:
        if k_iters < 0:
            raise ValueError(f"Number of sweeps must be >= 0, got {k_iters}")
        for _ in range(k_iters):
            U = sdc_sweep(p, U, u0)
        return U

    if not residual_tol > 0:
        raise ValueError(f"Residual tolerance must be positive, got {residual_tol}")
    residual_norm = float(np.max(np.abs(collocation_residual(p, U, u0))))
    for sweep in range(max_sweeps + 1):
        if residual_norm <= residual_tol:
            logger.debug(f"Collocation converged after {sweep} sweeps, |r| = {residual_norm:.3e}")
            return U
        if sweep == max_sweeps:
            break
        U = sdc_sweep(p, U, u0)
        residual_norm = float(np.max(np.abs(collocation_residual(p, U, u0))))
    raise CollocationConvergenceError(
        f"Collocation residual {residual_norm:.3e} above {residual_tol:.1e} after {max_sweeps} sweeps",
        sweeps=max_sweeps,
        residual_norm=residual_norm,
    )


def run_sdc_serial(
    p: StepProblem,
    u_initial: np.ndarray,
    n_steps: int,
    k_iters: Optional[int] = None,
    residual_tol: Optional[float] = None,
    progress: bool = False,
) -> np.ndarray:
    """
    March n_steps steps of serial SDC and return the final-time state.

    Each step starts from the last-node value of the previous one.

    Raises:
        SweepError: tagged with the failing step
        CollocationConvergenceError: tolerance mode did not converge
    """
    if n_steps < 1:
        raise ValueError(f"Number of steps must be >= 1, got {n_steps}")
    u = p.check_vector(u_initial, "initial value").copy()
    for step in tqdm(range(n_steps), desc="SDC steps", unit="step", disable=not progress, leave=False):
        try:
            U = solve_collocation(p, u, k_iters=k_iters, residual_tol=residual_tol)
        except SweepError as exc:
            raise exc.with_context(step=step) from exc.__cause__
        u = U[-1].copy()
    return u
