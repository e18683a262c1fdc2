"""
Two-level PFASST: FAS correction, the five-step iteration and windowed runs.

One iteration on a block with state U and initial value u00:
    1. restrict:          Ũ = R U
    2. FAS correction:    τ = C̃(Ũ) - b̃ - restrict_residual(C(U) - b)
    3. coarse sweep:      Ũ⁺ = P^seq on the coarse level with right-hand side b̃ + τ
    4. coarse correction: U½ = U + T (Ũ⁺ - Ũ)
    5. fine sweep:        U⁺ = P^par(U½) on the fine level
R = I ⊗ R^N and T = I ⊗ T^N act on the last axis. Residuals are restricted
with (T^N)^T in the mass formulation and with R^N in the mass-inverted one.
"""

from concurrent.futures import Executor
from dataclasses import dataclass
from logging import getLogger
from typing import Optional

import numpy as np

from ..errors import CollocationConvergenceError, ConfigurationError, SweepError
from ..fem_space import TransferPair
from ..sdc import Formulation
from .composite import BlockState, CompositeOperator, composite_residual, sweep_parallel, sweep_sequential

logger = getLogger(__name__)

DEFAULT_MAX_ITERS = 50


@dataclass(frozen=True)
class TwoLevelHierarchy:
    """
    Fine and coarse composite operators linked by a TransferPair.

    Both levels share block size, step size, formulation and collocation
    nodes; only the spatial discretization differs.
    """
    fine: CompositeOperator
    coarse: CompositeOperator
    transfer: TransferPair

    def __post_init__(self):
        fine, coarse = self.fine.problem, self.coarse.problem
        if self.fine.n_steps != self.coarse.n_steps:
            raise ConfigurationError(
                f"Levels have different block sizes ({self.fine.n_steps} vs {self.coarse.n_steps})"
            )
        if not fine.table.matches(coarse.table):
            raise ConfigurationError("Levels must share the collocation nodes")
        if fine.dt != coarse.dt:
            raise ConfigurationError(f"Levels have different step sizes ({fine.dt} vs {coarse.dt})")
        if fine.formulation is not coarse.formulation:
            raise ConfigurationError("Levels must use the same formulation")
        if self.transfer.fine != fine.ops.space or self.transfer.coarse != coarse.ops.space:
            raise ConfigurationError("Transfer operators do not belong to the level spaces")

    @classmethod
    def build(cls, fine, coarse, n_steps: int) -> "TwoLevelHierarchy":
        """Hierarchy from two StepProblems."""
        transfer = TransferPair.build(coarse.ops.space, fine.ops.space)
        return cls(CompositeOperator(fine, n_steps), CompositeOperator(coarse, n_steps), transfer)

    @property
    def n_steps(self) -> int:
        return self.fine.n_steps

    @property
    def formulation(self) -> Formulation:
        return self.fine.problem.formulation

    def restrict(self, values: np.ndarray) -> np.ndarray:
        return self.transfer.restrict(values)

    def prolong(self, values: np.ndarray) -> np.ndarray:
        return self.transfer.prolong(values)

    def restrict_residual(self, residual: np.ndarray) -> np.ndarray:
        if self.formulation is Formulation.MASS:
            return self.transfer.restrict_residual_transpose(residual)
        return self.transfer.restrict(residual)


def fas_tau(
    h: TwoLevelHierarchy,
    U: BlockState,
    u00: np.ndarray,
    U_coarse: Optional[BlockState] = None,
) -> BlockState:
    """
    FAS correction τ = r̃(R U, R u00) - restrict_residual(r(U, u00)).

    With τ added to the coarse right-hand side, R U solves the corrected
    coarse problem whenever U solves the fine one.
    """
    U = h.fine.check_block(U)
    if U_coarse is None:
        U_coarse = h.restrict(U)
    coarse_residual = composite_residual(h.coarse, U_coarse, h.restrict(u00))
    fine_residual = composite_residual(h.fine, U, u00)
    return coarse_residual - h.restrict_residual(fine_residual)


def pfasst_iteration(
    h: TwoLevelHierarchy,
    U: BlockState,
    u00: np.ndarray,
    executor: Optional[Executor] = None,
) -> BlockState:
    """
    One two-level PFASST iteration on a block.

    Raises:
        SweepError: tagged with level, step and node of the failing solve
    """
    U = h.fine.check_block(U)
    U_coarse = h.restrict(U)
    tau = fas_tau(h, U, u00, U_coarse)
    try:
        U_coarse_new = sweep_sequential(h.coarse, U_coarse, h.restrict(u00), tau)
    except SweepError as exc:
        raise exc.with_context(level="coarse") from exc.__cause__
    U_half = U + h.prolong(U_coarse_new - U_coarse)
    try:
        return sweep_parallel(h.fine, U_half, u00, executor=executor)
    except SweepError as exc:
        raise exc.with_context(level="fine") from exc.__cause__


def _residual_norm(h: TwoLevelHierarchy, U: BlockState, u00: np.ndarray) -> float:
    return float(np.max(np.abs(composite_residual(h.fine, U, u00))))


def run_pfasst(
    h: TwoLevelHierarchy,
    u_initial: np.ndarray,
    n_steps: int,
    k_iters: Optional[int] = None,
    residual_tol: Optional[float] = None,
    max_iters: int = DEFAULT_MAX_ITERS,
    executor: Optional[Executor] = None,
) -> np.ndarray:
    """
    Run PFASST over n_steps steps, L steps per block, blocks one after another.

    Each block starts from its initial value spread over all steps and
    nodes and runs either exactly k_iters iterations or iterates until the
    fine composite residual is at most residual_tol. The last node of the
    last step seeds the next block.

    Raises:
        ValueError: n_steps is not a positive multiple of the block size
        CollocationConvergenceError: tolerance mode exceeded max_iters
        SweepError: tagged with level, step and node
    """
    if (k_iters is None) == (residual_tol is None):
        raise ValueError("Pass exactly one of k_iters and residual_tol")
    if k_iters is not None and k_iters < 0:
        raise ValueError(f"Number of iterations must be >= 0, got {k_iters}")
    L = h.n_steps
    if n_steps < 1 or n_steps % L:
        raise ValueError(f"Number of steps {n_steps} is not a positive multiple of the block size {L}")

    u = h.fine.problem.check_vector(u_initial, "initial value").copy()
    for block in range(n_steps // L):
        U = h.fine.spread(u)
        if k_iters is not None:
            for _ in range(k_iters):
                U = pfasst_iteration(h, U, u, executor=executor)
        else:
            iteration = 0
            residual_norm = _residual_norm(h, U, u)
            while residual_norm > residual_tol:
                if iteration == max_iters:
                    raise CollocationConvergenceError(
                        f"Block {block}: composite residual {residual_norm:.3e} above "
                        f"{residual_tol:.1e} after {max_iters} iterations",
                        sweeps=max_iters,
                        residual_norm=residual_norm,
                    )
                U = pfasst_iteration(h, U, u, executor=executor)
                iteration += 1
                residual_norm = _residual_norm(h, U, u)
            logger.debug(f"Block {block}: {iteration} iterations, |r| = {residual_norm:.3e}")
        u = U[-1, -1].copy()
    return u
