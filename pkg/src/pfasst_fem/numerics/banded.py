#!/usr/bin/env python3
"""
Banded Matrices and Banded LU

Storage follows the LAPACK general-band layout used by
scipy.linalg.solve_banded: for a matrix A with lower bandwidth l and upper
bandwidth u, entries[u + i - j, j] == A[i, j]. Positions of the band array
that fall outside the matrix are kept at zero.

Factorization goes through LAPACK dgbtrf/dgbtrs (partial pivoting within the
band), exposed by scipy.linalg.lapack.
"""

from dataclasses import dataclass
from logging import getLogger
from typing import Iterable, Union

import numpy as np
from scipy.linalg import lapack

from ..errors import SingularMatrixError

logger = getLogger(__name__)

# Relative pivot threshold: |pivot| < PIVOT_RTOL * max row norm means singular.
PIVOT_RTOL = 1e-14

Vector = np.ndarray


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class BandedMatrix:
    """
    Square real matrix stored by diagonals.

    Attributes:
        n: Dimension
        lower_bw: Number of sub-diagonals
        upper_bw: Number of super-diagonals
        entries: Band storage, shape (lower_bw + upper_bw + 1, n), read-only
    """
    n: int
    lower_bw: int
    upper_bw: int
    entries: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Matrix dimension must be >= 1, got {self.n}")
        if not (0 <= self.lower_bw < self.n and 0 <= self.upper_bw < self.n):
            raise ValueError(
                f"Bandwidths ({self.lower_bw}, {self.upper_bw}) must lie in [0, {self.n})"
            )
        expected = (self.lower_bw + self.upper_bw + 1, self.n)
        entries = np.array(self.entries, dtype=float)
        if entries.shape != expected:
            raise ValueError(f"Band storage has shape {entries.shape}, expected {expected}")
        # Clear the unused corners so that "outside the band is zero" holds structurally.
        for d in range(1, self.upper_bw + 1):
            entries[self.upper_bw - d, :d] = 0.0
        for d in range(1, self.lower_bw + 1):
            entries[self.upper_bw + d, self.n - d:] = 0.0
        object.__setattr__(self, "entries", _readonly(entries))

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def zeros(cls, n: int, lower_bw: int, upper_bw: int) -> "BandedMatrix":
        return cls(n, lower_bw, upper_bw, np.zeros((lower_bw + upper_bw + 1, n)))

    @classmethod
    def identity(cls, n: int) -> "BandedMatrix":
        return cls(n, 0, 0, np.ones((1, n)))

    @classmethod
    def from_dense(cls, dense: np.ndarray, lower_bw: int = None, upper_bw: int = None) -> "BandedMatrix":
        """
        Build band storage from a dense square matrix.

        Bandwidths default to the full matrix (n - 1 each). Entries of the
        dense matrix outside the requested band are dropped.
        """
        dense = np.atleast_2d(np.asarray(dense, dtype=float))
        n = dense.shape[0]
        if dense.shape != (n, n):
            raise ValueError(f"Expected a square matrix, got shape {dense.shape}")
        lower_bw = n - 1 if lower_bw is None else lower_bw
        upper_bw = n - 1 if upper_bw is None else upper_bw
        entries = np.zeros((lower_bw + upper_bw + 1, n))
        for d in range(-lower_bw, upper_bw + 1):
            entries[upper_bw - d, max(0, d):n + min(0, d)] = np.diagonal(dense, d)
        return cls(n, lower_bw, upper_bw, entries)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n))
        for d in range(-self.lower_bw, self.upper_bw + 1):
            diag = self.entries[self.upper_bw - d, max(0, d):self.n + min(0, d)]
            dense += np.diag(diag, d)
        return dense

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def matvec(self, x: Vector) -> Vector:
        """Return A @ x."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"Vector of shape {x.shape} does not match matrix dimension {self.n}")
        y = self.entries[self.upper_bw] * x
        for d in range(1, self.upper_bw + 1):
            y[:-d] += self.entries[self.upper_bw - d, d:] * x[d:]
        for d in range(1, self.lower_bw + 1):
            y[d:] += self.entries[self.upper_bw + d, :-d] * x[:-d]
        return y

    def __matmul__(self, x: Vector) -> Vector:
        return self.matvec(x)

    def _widened(self, lower_bw: int, upper_bw: int) -> np.ndarray:
        entries = np.zeros((lower_bw + upper_bw + 1, self.n))
        offset = upper_bw - self.upper_bw
        entries[offset:offset + self.entries.shape[0]] = self.entries
        return entries

    def __add__(self, other: "BandedMatrix") -> "BandedMatrix":
        if not isinstance(other, BandedMatrix):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"Cannot add matrices of dimension {self.n} and {other.n}")
        lower_bw = max(self.lower_bw, other.lower_bw)
        upper_bw = max(self.upper_bw, other.upper_bw)
        entries = self._widened(lower_bw, upper_bw) + other._widened(lower_bw, upper_bw)
        return BandedMatrix(self.n, lower_bw, upper_bw, entries)

    def __sub__(self, other: "BandedMatrix") -> "BandedMatrix":
        if not isinstance(other, BandedMatrix):
            return NotImplemented
        return self + (-1.0) * other

    def __mul__(self, alpha: float) -> "BandedMatrix":
        return BandedMatrix(self.n, self.lower_bw, self.upper_bw, float(alpha) * self.entries)

    __rmul__ = __mul__

    def __neg__(self) -> "BandedMatrix":
        return (-1.0) * self

    def scale_columns(self, d: Vector) -> "BandedMatrix":
        """Return A @ diag(d)."""
        d = np.asarray(d, dtype=float)
        if d.shape != (self.n,):
            raise ValueError(f"Scaling vector of shape {d.shape} does not match dimension {self.n}")
        return BandedMatrix(self.n, self.lower_bw, self.upper_bw, self.entries * d[None, :])

    def abs(self) -> "BandedMatrix":
        return BandedMatrix(self.n, self.lower_bw, self.upper_bw, np.abs(self.entries))

    def row_norms(self) -> Vector:
        """Row sums of absolute values (the ∞-norm of each row)."""
        return self.abs().matvec(np.ones(self.n))

    def _row_slots(self, i: int):
        """Yield (band_row, column) pairs of row i inside the band."""
        for j in range(max(0, i - self.lower_bw), min(self.n, i + self.upper_bw + 1)):
            yield self.upper_bw + i - j, j

    def with_zero_rows(self, rows: Iterable[int]) -> "BandedMatrix":
        entries = np.array(self.entries)
        for i in rows:
            for band_row, j in self._row_slots(i):
                entries[band_row, j] = 0.0
        return BandedMatrix(self.n, self.lower_bw, self.upper_bw, entries)

    def with_unit_rows(self, rows: Iterable[int]) -> "BandedMatrix":
        """Replace the given rows by rows of the identity matrix."""
        rows = list(rows)
        zeroed = self.with_zero_rows(rows)
        entries = np.array(zeroed.entries)
        entries[self.upper_bw, rows] = 1.0
        return BandedMatrix(self.n, self.lower_bw, self.upper_bw, entries)

    def is_symmetric(self, atol: float = 1e-14) -> bool:
        if self.lower_bw != self.upper_bw:
            return False
        for d in range(1, self.upper_bw + 1):
            upper = self.entries[self.upper_bw - d, d:]
            lower = self.entries[self.upper_bw + d, :-d]
            if not np.allclose(upper, lower, rtol=0.0, atol=atol):
                return False
        return True


@dataclass(frozen=True)
class Factorization:
    """
    LU factors of a BandedMatrix in LAPACK dgbtrf format.

    Immutable after creation; solve() does not modify the factors, so one
    factorization may be shared read-only between threads.
    """
    n: int
    lower_bw: int
    upper_bw: int
    lu: np.ndarray
    pivots: np.ndarray

    def solve(self, b: Vector) -> Vector:
        b = np.asarray(b, dtype=float)
        if b.shape != (self.n,):
            raise ValueError(f"Right-hand side of shape {b.shape} does not match dimension {self.n}")
        x, info = lapack.dgbtrs(self.lu, self.lower_bw, self.upper_bw, b, self.pivots)
        if info != 0:
            raise ValueError(f"dgbtrs rejected its arguments (info={info})")
        return x


def lu_factor(matrix: Union[BandedMatrix, np.ndarray]) -> Factorization:
    """
    Factorize a banded matrix with partial pivoting.

    Args:
        matrix: BandedMatrix (a dense square ndarray is accepted and treated
            as a full band)

    Returns:
        Factorization whose solve() reproduces A x = b

    Raises:
        SingularMatrixError: when a pivot magnitude falls below
            1e-14 × the largest row norm of A
    """
    if not isinstance(matrix, BandedMatrix):
        matrix = BandedMatrix.from_dense(matrix)
    l, u, n = matrix.lower_bw, matrix.upper_bw, matrix.n

    # dgbtrf needs l extra rows on top for the fill-in of pivoting.
    work = np.zeros((2 * l + u + 1, n), order="F")
    work[l:, :] = matrix.entries
    lu, pivots, info = lapack.dgbtrf(work, l, u)
    if info < 0:
        raise ValueError(f"dgbtrf rejected argument {-info}")
    if info > 0:
        raise SingularMatrixError(f"Exactly zero pivot at row {info - 1}", pivot_index=info - 1)

    scale = float(np.max(matrix.row_norms()))
    diagonal = np.abs(lu[l + u, :])
    threshold = PIVOT_RTOL * scale
    small = np.flatnonzero(diagonal < threshold)
    if scale == 0.0 or small.size:
        index = int(small[0]) if small.size else 0
        raise SingularMatrixError(
            f"Pivot {diagonal[index] if small.size else 0.0:.3e} at row {index} "
            f"below threshold {threshold:.3e}",
            pivot_index=index,
        )
    return Factorization(n, l, u, lu, pivots)


def solve(matrix: Union[BandedMatrix, np.ndarray], b: Vector) -> Vector:
    """Factorize and solve in one call."""
    return lu_factor(matrix).solve(b)
