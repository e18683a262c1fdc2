"""
Composite collocation problem over a block of L steps.

    (I_LM ⊗ M - Δt (I_L ⊗ Q ⊗ I_N) F - E ⊗ H)(U) = b,   H = N_mat ⊗ M

E has ones on its lower off-diagonal and N_mat ones in its last column, so
step l receives the last-node value of step l-1 as its initial value. H is
never formed: the coupling is applied by reading U[l-1, -1].

BlockState arrays have shape (L, M, N), step-major then node-major.
"""

from concurrent.futures import Executor
from dataclasses import dataclass
from logging import getLogger
from typing import List, Optional

import numpy as np

from ..errors import SweepError
from ..sdc import StepProblem, collocation_residual, sdc_sweep

logger = getLogger(__name__)

BlockState = np.ndarray


@dataclass(frozen=True)
class CompositeOperator:
    """
    One level of the composite problem.

    Attributes:
        problem: Step problem shared by all steps of the block
        n_steps: Block size L
    """
    problem: StepProblem
    n_steps: int

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError(f"Block size must be >= 1, got {self.n_steps}")

    @property
    def shape(self) -> tuple:
        return (self.n_steps,) + self.problem.shape

    @property
    def E(self) -> np.ndarray:
        """Step coupling, ones on the lower off-diagonal (L x L)."""
        return np.eye(self.n_steps, k=-1)

    @property
    def N_mat(self) -> np.ndarray:
        """Node coupling, ones in the last column (M x M)."""
        M = self.problem.n_nodes
        matrix = np.zeros((M, M))
        matrix[:, -1] = 1.0
        return matrix

    def check_block(self, U: BlockState, name: str = "block state") -> BlockState:
        U = np.asarray(U, dtype=float)
        if U.shape != self.shape:
            raise ValueError(f"{name} of shape {U.shape} does not match level shape {self.shape}")
        return U

    def spread(self, u0: np.ndarray) -> BlockState:
        """Initial value copied to every step and node."""
        return np.broadcast_to(self.problem.spread(u0), self.shape).copy()

    def initial_values(self, U: BlockState, u00: np.ndarray) -> List[np.ndarray]:
        """Step initial values implied by U: u00, then the previous steps' last nodes."""
        return [np.asarray(u00, dtype=float)] + [U[l - 1, -1] for l in range(1, self.n_steps)]


def composite_residual(
    op: CompositeOperator,
    U: BlockState,
    u00: np.ndarray,
    tau: Optional[BlockState] = None,
) -> BlockState:
    """Residual C(U) - b of the composite problem (minus tau if given)."""
    U = op.check_block(U)
    u00 = op.problem.check_vector(u00, "block initial value")
    if tau is not None:
        tau = op.check_block(tau, "FAS correction")
    starts = op.initial_values(U, u00)
    return np.stack([
        collocation_residual(op.problem, U[l], starts[l], None if tau is None else tau[l])
        for l in range(op.n_steps)
    ])


def _sweep_step(op: CompositeOperator, U_l: np.ndarray, start: np.ndarray, step: int, tau_l=None) -> np.ndarray:
    try:
        return sdc_sweep(op.problem, U_l, start, tau_l)
    except SweepError as exc:
        raise exc.with_context(step=step) from exc.__cause__


def sweep_parallel(
    op: CompositeOperator,
    U: BlockState,
    u00: np.ndarray,
    executor: Optional[Executor] = None,
) -> BlockState:
    """
    P^par: one SDC sweep on every step, all steps independent.

    Initial values come from the input iterate (u00, then U[l-1, -1]), so
    the steps only read a snapshot of U and may run concurrently on
    `executor`. The result does not depend on the schedule.
    """
    snapshot = op.check_block(U).copy()
    snapshot.flags.writeable = False
    u00 = op.problem.check_vector(u00, "block initial value")
    starts = op.initial_values(snapshot, u00)

    def work(step: int) -> np.ndarray:
        return _sweep_step(op, snapshot[step], starts[step], step)

    steps = range(op.n_steps)
    results = list(executor.map(work, steps)) if executor is not None else [work(l) for l in steps]
    return np.stack(results)


def sweep_sequential(
    op: CompositeOperator,
    U: BlockState,
    u00: np.ndarray,
    tau: Optional[BlockState] = None,
) -> BlockState:
    """
    P^seq: one SDC sweep per step in order, each step starting from the
    freshly updated last node of its predecessor.
    """
    U = op.check_block(U)
    start = op.problem.check_vector(u00, "block initial value")
    if tau is not None:
        tau = op.check_block(tau, "FAS correction")
    result = np.empty_like(U)
    for l in range(op.n_steps):
        result[l] = _sweep_step(op, U[l], start, l, None if tau is None else tau[l])
        start = result[l, -1]
    return result
