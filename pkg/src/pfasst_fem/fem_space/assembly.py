"""
Assembly of mass and stiffness matrices and the nodal nonlinearity.

Element integrals use Gauss-Legendre quadrature with order + 1 points,
exact for the degree 2p integrands of both matrices. Global matrices are
scattered straight into band storage: dofs of one element are at most
`order` apart, so both matrices have lower and upper bandwidth `order`.
"""

from logging import getLogger
from typing import Callable

import numpy as np

from ..numerics.banded import BandedMatrix
from .space import LagrangeSpace, gauss_rule, reference_basis, reference_basis_derivative

logger = getLogger(__name__)

ScalarFunction = Callable[[np.ndarray], np.ndarray]


def element_mass(space: LagrangeSpace) -> np.ndarray:
    """Local mass matrix ∫_K φ_k φ_l dx of one element, shape (p+1, p+1)."""
    points, weights = gauss_rule(space.order + 1)
    phi = reference_basis(space.order, points)
    return space.mesh.h * (phi.T * weights) @ phi


def element_stiffness(space: LagrangeSpace) -> np.ndarray:
    """Local stiffness matrix ∫_K φ_k' φ_l' dx of one element, shape (p+1, p+1)."""
    points, weights = gauss_rule(space.order + 1)
    dphi = reference_basis_derivative(space.order, points)
    return (dphi.T * weights) @ dphi / space.mesh.h


def _assemble(space: LagrangeSpace, local: np.ndarray) -> BandedMatrix:
    p = space.order
    entries = np.zeros((2 * p + 1, space.n_dofs))
    bases = p * np.arange(space.n_elements)
    # A[i, j] lives at entries[p + i - j, j]; all elements share one local matrix.
    for k in range(p + 1):
        for l in range(p + 1):
            entries[p + k - l, bases + l] += local[k, l]
    return BandedMatrix(space.n_dofs, p, p, entries)


def assemble_mass(space: LagrangeSpace) -> BandedMatrix:
    """M_ij = ∫ φ_i φ_j dx."""
    return _assemble(space, element_mass(space))


def assemble_stiffness(space: LagrangeSpace) -> BandedMatrix:
    """A_ij = ∫ φ_i' φ_j' dx."""
    return _assemble(space, element_stiffness(space))


def nodal_nonlinearity(space: LagrangeSpace, g: ScalarFunction, u: np.ndarray) -> np.ndarray:
    """
    Coefficients of the interpolated nonlinearity, (g(u_1), ..., g(u_N)).

    Raises:
        ValueError: if u does not have one entry per dof
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (space.n_dofs,):
        raise ValueError(f"State of shape {u.shape} does not match {space.n_dofs} dofs")
    return np.asarray(g(u), dtype=float)
