"""
Semidiscrete right-hand side f(u) = -A u + M g(u) and its Jacobian.

SpatialOperators bundles the assembled matrices of one space together with
the boundary treatment. In BoundaryMode.DIRICHLET the first and last dof are
frozen: their mass rows become unit rows and their rows of A, f and df/du
are zero, so every time integrator keeps them at their initial values.
"""

from dataclasses import dataclass
from enum import Enum
from logging import getLogger
from typing import Tuple

import numpy as np

from ..numerics.banded import BandedMatrix, Factorization, lu_factor
from .assembly import ScalarFunction, assemble_mass, assemble_stiffness, nodal_nonlinearity
from .space import LagrangeSpace

logger = getLogger(__name__)


class BoundaryMode(str, Enum):
    """Boundary treatment of the semidiscrete system."""
    NATURAL = "natural"      # pure weak form, homogeneous Neumann
    DIRICHLET = "dirichlet"  # boundary dofs frozen at their initial values


@dataclass(frozen=True)
class SpatialOperators:
    """
    Assembled operators of one LagrangeSpace.

    Attributes:
        space: The FE space
        mass: Mass matrix M (with unit boundary rows in DIRICHLET mode)
        stiffness: Stiffness matrix A (with zero boundary rows in DIRICHLET mode)
        bc_mode: Boundary treatment
        mass_factorization: Banded LU of `mass`, used to apply M^-1
    """
    space: LagrangeSpace
    mass: BandedMatrix
    stiffness: BandedMatrix
    bc_mode: BoundaryMode
    mass_factorization: Factorization

    @property
    def n_dofs(self) -> int:
        return self.space.n_dofs

    @property
    def constrained_dofs(self) -> Tuple[int, ...]:
        if self.bc_mode is BoundaryMode.DIRICHLET:
            return (0, self.space.n_dofs - 1)
        return ()

    def solve_mass(self, rhs: np.ndarray) -> np.ndarray:
        """Return M^-1 rhs."""
        return self.mass_factorization.solve(rhs)


def build_operators(space: LagrangeSpace, bc_mode: BoundaryMode = BoundaryMode.NATURAL) -> SpatialOperators:
    """Assemble M and A for a space and apply the boundary treatment."""
    bc_mode = BoundaryMode(bc_mode)
    mass = assemble_mass(space)
    stiffness = assemble_stiffness(space)
    if bc_mode is BoundaryMode.DIRICHLET:
        boundary = (0, space.n_dofs - 1)
        mass = mass.with_unit_rows(boundary)
        stiffness = stiffness.with_zero_rows(boundary)
    logger.debug(f"Assembled operators for {space.describe()} ({space.n_dofs} dofs, {bc_mode.value})")
    return SpatialOperators(
        space=space,
        mass=mass,
        stiffness=stiffness,
        bc_mode=bc_mode,
        mass_factorization=lu_factor(mass),
    )


def apply_f(ops: SpatialOperators, g: ScalarFunction, u: np.ndarray) -> np.ndarray:
    """f(u) = -A u + M g(u), zero on constrained dofs."""
    values = ops.mass @ nodal_nonlinearity(ops.space, g, u) - ops.stiffness @ u
    constrained = list(ops.constrained_dofs)
    if constrained:
        values[constrained] = 0.0
    return values


def jacobian_f(ops: SpatialOperators, g_prime: ScalarFunction, u: np.ndarray) -> BandedMatrix:
    """df/du = -A + M diag(g'(u)), zero rows on constrained dofs."""
    jacobian = ops.mass.scale_columns(nodal_nonlinearity(ops.space, g_prime, u)) - ops.stiffness
    if ops.constrained_dofs:
        jacobian = jacobian.with_zero_rows(ops.constrained_dofs)
    return jacobian
