"""
One time step of a mass-matrix ODE M u' = f(u), ready for collocation.

Two formulations of the same collocation problem are supported:
    MASS           (I ⊗ M) U - Δt (Q ⊗ I) F(U) = (I ⊗ M) u0
    MASS_INVERTED  U - Δt (Q ⊗ I) M^-1 F(U) = u0
All quantities a sweep manipulates (residuals, right-hand sides, FAS
corrections) are expressed in the units of the chosen formulation.
"""

from dataclasses import dataclass
from enum import Enum
from logging import getLogger
from typing import Callable

import numpy as np

from ..collocation import CollocationTable
from ..fem_space import SpatialOperators, apply_f, jacobian_f
from ..numerics import DEFAULT_MAX_ITER, DEFAULT_TOL, BandedMatrix

logger = getLogger(__name__)

ScalarFunction = Callable[[np.ndarray], np.ndarray]

# (M, N) node-major state of one step
NodeVector = np.ndarray


class Formulation(str, Enum):
    MASS = "mass"
    MASS_INVERTED = "mass_inverted"


@dataclass(frozen=True)
class StepProblem:
    """
    Collocation problem of a single step of length dt.

    Attributes:
        ops: Spatial operators (M, A, boundary treatment)
        g: Reaction term, applied componentwise
        g_prime: Derivative of g
        table: Collocation nodes and matrices
        dt: Step size
        formulation: MASS or MASS_INVERTED
        newton_tol: ∞-norm tolerance of the node solves
        newton_max_iter: Newton iteration cap of the node solves
    """
    ops: SpatialOperators
    g: ScalarFunction
    g_prime: ScalarFunction
    table: CollocationTable
    dt: float
    formulation: Formulation = Formulation.MASS
    newton_tol: float = DEFAULT_TOL
    newton_max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"Step size must be positive, got {self.dt}")
        object.__setattr__(self, "formulation", Formulation(self.formulation))

    @property
    def n_nodes(self) -> int:
        return self.table.M

    @property
    def n_dofs(self) -> int:
        return self.ops.n_dofs

    @property
    def shape(self) -> tuple:
        return (self.table.M, self.ops.n_dofs)

    def f(self, u: np.ndarray) -> np.ndarray:
        return apply_f(self.ops, self.g, u)

    def jacobian(self, u: np.ndarray) -> BandedMatrix:
        return jacobian_f(self.ops, self.g_prime, u)

    def mass(self, u: np.ndarray) -> np.ndarray:
        """Left operator applied to one state: M u or u."""
        if self.formulation is Formulation.MASS:
            return self.ops.mass @ u
        return np.array(u, dtype=float)

    def rhs_f(self, u: np.ndarray) -> np.ndarray:
        """Right-hand side as it enters the quadrature: f(u) or M^-1 f(u)."""
        values = self.f(u)
        if self.formulation is Formulation.MASS:
            return values
        return self.ops.solve_mass(values)

    def rhs_f_nodes(self, U: NodeVector) -> NodeVector:
        return np.stack([self.rhs_f(u) for u in U])

    def mass_nodes(self, U: NodeVector) -> NodeVector:
        return np.stack([self.mass(u) for u in U])

    def check_nodes(self, U: NodeVector, name: str = "node vector") -> NodeVector:
        U = np.asarray(U, dtype=float)
        if U.shape != self.shape:
            raise ValueError(f"{name} of shape {U.shape} does not match problem shape {self.shape}")
        return U

    def check_vector(self, u: np.ndarray, name: str = "vector") -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n_dofs,):
            raise ValueError(f"{name} of shape {u.shape} does not match {self.n_dofs} dofs")
        return u

    def spread(self, u0: np.ndarray) -> NodeVector:
        """Initial value copied to every node."""
        u0 = self.check_vector(u0, "initial value")
        return np.tile(u0, (self.n_nodes, 1))
