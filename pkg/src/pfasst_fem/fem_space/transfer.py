"""
Transfer operators between nested Lagrange spaces.

Both operators are pointwise evaluations of FE functions:
    injection   T^N = coarse.evaluation_matrix(fine dof coordinates)   (N x Ñ)
    restriction R^N = fine.evaluation_matrix(coarse dof coordinates)   (Ñ x N)

Supported nestings are p-coarsening (same mesh, coarse order <= fine order)
and h-coarsening (same order, fine mesh = coarse mesh split in two).
"""

from dataclasses import dataclass
from logging import getLogger

import numpy as np
from scipy import sparse

from ..errors import NonNestedSpacesError
from .space import LagrangeSpace

logger = getLogger(__name__)


def is_nested(coarse: LagrangeSpace, fine: LagrangeSpace) -> bool:
    """True if every coarse FE function is also a fine FE function under a supported nesting."""
    if (coarse.mesh.a, coarse.mesh.b) != (fine.mesh.a, fine.mesh.b):
        return False
    same_mesh = coarse.n_elements == fine.n_elements and coarse.order <= fine.order
    halved = coarse.order == fine.order and fine.n_elements == 2 * coarse.n_elements
    return same_mesh or halved


def _require_nested(coarse: LagrangeSpace, fine: LagrangeSpace):
    if not is_nested(coarse, fine):
        raise NonNestedSpacesError(
            f"{coarse.describe()} is not nested in {fine.describe()}; supported are same mesh "
            f"with lower order, or same order with half the elements"
        )


def build_injection(coarse: LagrangeSpace, fine: LagrangeSpace) -> sparse.csr_matrix:
    """Canonical injection T^N: column j holds the fine nodal values of coarse basis function j."""
    _require_nested(coarse, fine)
    return coarse.evaluation_matrix(fine.dof_coordinates)


def build_interp_restriction(fine: LagrangeSpace, coarse: LagrangeSpace) -> sparse.csr_matrix:
    """Interpolation restriction R^N: (R^N u)_i = u^h(x̃_i)."""
    _require_nested(coarse, fine)
    return fine.evaluation_matrix(coarse.dof_coordinates)


def apply_rows(matrix: sparse.spmatrix, values: np.ndarray) -> np.ndarray:
    """Apply `matrix` to every vector along the last axis of `values`."""
    values = np.asarray(values, dtype=float)
    if values.shape[-1] != matrix.shape[1]:
        raise ValueError(
            f"Last axis of shape {values.shape} does not match operator of shape {matrix.shape}"
        )
    flat = values.reshape(-1, values.shape[-1])
    result = np.asarray(matrix @ flat.T).T
    return result.reshape(values.shape[:-1] + (matrix.shape[0],))


@dataclass(frozen=True)
class TransferPair:
    """
    Injection and interpolation restriction of one nested pair of spaces.

    Attributes:
        coarse: Coarse space Ṽ^h
        fine: Fine space V^h
        injection: T^N, shape (N, Ñ)
        restriction: R^N, shape (Ñ, N)
    """
    coarse: LagrangeSpace
    fine: LagrangeSpace
    injection: sparse.csr_matrix
    restriction: sparse.csr_matrix

    @classmethod
    def build(cls, coarse: LagrangeSpace, fine: LagrangeSpace) -> "TransferPair":
        injection = build_injection(coarse, fine)
        restriction = build_interp_restriction(fine, coarse)
        logger.debug(
            f"Transfer {fine.describe()} -> {coarse.describe()}: "
            f"T^N nnz={injection.nnz}, R^N nnz={restriction.nnz}"
        )
        return cls(coarse, fine, injection, restriction)

    @property
    def injection_transpose(self) -> sparse.csr_matrix:
        return self.injection.T.tocsr()

    def prolong(self, coarse_values: np.ndarray) -> np.ndarray:
        """T^N along the last axis."""
        return apply_rows(self.injection, coarse_values)

    def restrict(self, fine_values: np.ndarray) -> np.ndarray:
        """R^N along the last axis."""
        return apply_rows(self.restriction, fine_values)

    def restrict_residual_transpose(self, fine_residual: np.ndarray) -> np.ndarray:
        """(T^N)^T along the last axis; exact restriction of dual (residual) vectors."""
        return apply_rows(self.injection_transpose, fine_residual)
