"""
Right Gauss-Radau (Radau IIA) collocation tables on the unit step (0, 1].

With x = 2s - 1 the M nodes are the M - 1 roots of P_M(x) - P_{M-1}(x)
inside (-1, 1) together with x = 1, where P_k is the Legendre polynomial of
degree k. The interior roots are bracketed on a uniform grid and refined
with Brent's method.
"""

from dataclasses import dataclass
from functools import lru_cache
from logging import getLogger

import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial.legendre import Legendre
from scipy.optimize import brentq

from ..errors import NumericalError, UnsupportedNodeCountError

logger = getLogger(__name__)

MIN_NODES = 1
MAX_NODES = 9
_BRACKET_POINTS = 4001


@lru_cache(maxsize=None)
def _radau_nodes(M: int) -> tuple:
    if M == 1:
        return (1.0,)
    radau = Legendre.basis(M) - Legendre.basis(M - 1)
    # Divide out the known root x = 1 so the quotient changes sign only at interior roots.
    interior, _ = divmod(radau, Legendre([-1.0, 1.0]))

    grid = np.linspace(-1.0, 1.0, _BRACKET_POINTS)
    values = interior(grid)
    roots = [float(x) for x, v in zip(grid, values) if v == 0.0]
    for left, right, v_left, v_right in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if v_left * v_right < 0.0:
            roots.append(brentq(interior, left, right, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    if len(roots) != M - 1:
        raise NumericalError(f"Found {len(roots)} interior Radau roots for M={M}, expected {M - 1}")

    nodes = 0.5 * (np.sort(roots) + 1.0)
    return tuple(nodes) + (1.0,)


def radau_nodes(M: int) -> np.ndarray:
    """
    Right Radau nodes on (0, 1], increasing, last node exactly 1.

    Raises:
        UnsupportedNodeCountError: M outside 1..9
    """
    if not isinstance(M, (int, np.integer)) or not MIN_NODES <= M <= MAX_NODES:
        raise UnsupportedNodeCountError(
            f"Radau node count must be an integer in [{MIN_NODES}, {MAX_NODES}], got {M!r}"
        )
    return np.array(_radau_nodes(int(M)))


def _check_nodes(tau: np.ndarray) -> np.ndarray:
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if tau.ndim != 1 or tau.size == 0:
        raise ValueError(f"Nodes must be a non-empty 1D array, got shape {tau.shape}")
    if tau[0] <= 0.0 or tau[-1] > 1.0 or np.any(np.diff(tau) <= 0.0):
        raise ValueError(f"Nodes must be strictly increasing in (0, 1], got {tau}")
    return tau


def build_Q(tau: np.ndarray) -> np.ndarray:
    """
    Spectral quadrature matrix Q[m, j] = ∫_0^{τ_m} L_j(s) ds.

    The Lagrange polynomials are expanded in Legendre polynomials of
    x = 2s - 1 and integrated exactly.
    """
    tau = _check_nodes(tau)
    M = tau.size
    x = 2.0 * tau - 1.0
    coefficients = np.linalg.solve(legendre.legvander(x, M - 1), np.eye(M))
    Q = np.empty((M, M))
    for j in range(M):
        antiderivative = legendre.legint(coefficients[:, j], lbnd=-1.0)
        Q[:, j] = 0.5 * legendre.legval(x, antiderivative)
    return Q


def build_QDelta_BE(tau: np.ndarray) -> np.ndarray:
    """Backward-Euler Q_Δ: (Q_Δ)[m, j] = τ_j - τ_{j-1} for j <= m, zero above the diagonal."""
    tau = _check_nodes(tau)
    dtau = np.diff(tau, prepend=0.0)
    return np.tril(np.broadcast_to(dtau, (tau.size, tau.size)))


@dataclass(frozen=True)
class CollocationTable:
    """
    Nodes and quadrature matrices of one collocation rule.

    Attributes:
        tau: Nodes in (0, 1], increasing
        Q: Spectral quadrature matrix, shape (M, M)
        QDelta: Lower-triangular backward-Euler matrix, shape (M, M)
    """
    tau: np.ndarray
    Q: np.ndarray
    QDelta: np.ndarray

    def __post_init__(self):
        M = self.tau.size
        if self.Q.shape != (M, M) or self.QDelta.shape != (M, M):
            raise ValueError(
                f"Tables of shapes {self.Q.shape}, {self.QDelta.shape} do not match {M} nodes"
            )
        for array in (self.tau, self.Q, self.QDelta):
            array.flags.writeable = False

    @classmethod
    def from_nodes(cls, tau: np.ndarray) -> "CollocationTable":
        tau = np.array(_check_nodes(tau))
        return cls(tau, build_Q(tau), np.array(build_QDelta_BE(tau)))

    @classmethod
    def radau_right(cls, M: int) -> "CollocationTable":
        return cls.from_nodes(radau_nodes(M))

    @property
    def M(self) -> int:
        return self.tau.size

    @property
    def dtau(self) -> np.ndarray:
        return np.diff(self.tau, prepend=0.0)

    def matches(self, other: "CollocationTable") -> bool:
        return self.M == other.M and np.array_equal(self.tau, other.tau)
