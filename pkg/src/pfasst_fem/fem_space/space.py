"""
Continuous Lagrange finite-element spaces of order 1..3 on a Mesh1D.

Degrees of freedom sit at equispaced nodes inside every element and are
shared at element interfaces, so the global dof coordinates are
x_i = a + i * h / p, i = 0..p*n_elements. Element e owns dofs
e*p .. e*p + p.
"""

from dataclasses import dataclass
from functools import lru_cache
from logging import getLogger
from typing import Tuple

import numpy as np
from numpy.polynomial import legendre, polynomial
from scipy import sparse

from ..errors import ConfigurationError
from .mesh import Mesh1D

logger = getLogger(__name__)

SUPPORTED_ORDERS = (1, 2, 3)

# Evaluation weights smaller than this are rounding noise of the basis polynomials.
SNAP_TOL = 1e-13


@lru_cache(maxsize=None)
def _basis_coefficients(order: int) -> np.ndarray:
    """Monomial coefficients of the reference basis; column k is the basis function of node k/order."""
    nodes = np.linspace(0.0, 1.0, order + 1)
    coefficients = np.linalg.inv(polynomial.polyvander(nodes, order))
    coefficients.flags.writeable = False
    return coefficients


def reference_basis(order: int, xi: np.ndarray) -> np.ndarray:
    """Values of the reference basis at xi ∈ [0, 1], shape (len(xi), order + 1)."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return polynomial.polyvander(xi, order) @ _basis_coefficients(order)


def reference_basis_derivative(order: int, xi: np.ndarray) -> np.ndarray:
    """d/dxi of the reference basis at xi, shape (len(xi), order + 1)."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    derivative = polynomial.polyder(_basis_coefficients(order), axis=0)
    return polynomial.polyvander(xi, order - 1) @ derivative


@lru_cache(maxsize=None)
def gauss_rule(n_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre points and weights mapped to [0, 1]."""
    points, weights = legendre.leggauss(n_points)
    points = 0.5 * (points + 1.0)
    weights = 0.5 * weights
    points.flags.writeable = False
    weights.flags.writeable = False
    return points, weights


@dataclass(frozen=True)
class LagrangeSpace:
    """
    Lagrange FE space V^h of fixed polynomial order on a uniform mesh.

    Attributes:
        mesh: Underlying Mesh1D
        order: Polynomial order p (1, 2 or 3)
    """
    mesh: Mesh1D
    order: int

    def __post_init__(self):
        if self.order not in SUPPORTED_ORDERS:
            raise ConfigurationError(
                f"Polynomial order must be one of {SUPPORTED_ORDERS}, got {self.order}"
            )

    @classmethod
    def uniform(cls, a: float, b: float, n_elements: int, order: int) -> "LagrangeSpace":
        return cls(Mesh1D(a, b, n_elements), order)

    @property
    def n_elements(self) -> int:
        return self.mesh.n_elements

    @property
    def n_dofs(self) -> int:
        return self.order * self.mesh.n_elements + 1

    @property
    def dof_coordinates(self) -> np.ndarray:
        coordinates = self.mesh.a + (self.mesh.h / self.order) * np.arange(self.n_dofs)
        coordinates[-1] = self.mesh.b
        return coordinates

    def element_dofs(self, element: int) -> np.ndarray:
        start = element * self.order
        return np.arange(start, start + self.order + 1)

    def evaluation_matrix(self, points: np.ndarray) -> sparse.csr_matrix:
        """
        Sparse matrix E with (E @ u)[i] = u^h(points[i]).

        Row i holds the values of the basis functions of the element that
        contains points[i]. Weights within SNAP_TOL of 0 or 1 are snapped,
        so a point on a dof coordinate yields an exact unit row.
        """
        points = np.atleast_1d(np.asarray(points, dtype=float))
        elements = self.mesh.locate(points)
        left = self.mesh.vertices[elements]
        xi = np.clip((points - left) / self.mesh.h, 0.0, 1.0)

        values = reference_basis(self.order, xi)
        values[np.abs(values) < SNAP_TOL] = 0.0
        values[np.abs(values - 1.0) < SNAP_TOL] = 1.0
        rows = np.repeat(np.arange(points.size), self.order + 1)
        cols = (elements[:, None] * self.order + np.arange(self.order + 1)[None, :]).ravel()
        matrix = sparse.csr_matrix(
            (values.ravel(), (rows, cols)), shape=(points.size, self.n_dofs)
        )
        matrix.eliminate_zeros()
        return matrix

    def evaluate(self, u: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Point values of the FE function with coefficient vector u."""
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n_dofs,):
            raise ValueError(f"Coefficient vector of shape {u.shape} does not match {self.n_dofs} dofs")
        return self.evaluation_matrix(points) @ u

    def describe(self) -> str:
        return f"P{self.order} on [{self.mesh.a:g}, {self.mesh.b:g}] with {self.n_elements} elements"
