"""
Uniform 1D meshes.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Mesh1D:
    """
    Uniform partition of [a, b] into n_elements intervals.

    Attributes:
        a: Left endpoint
        b: Right endpoint
        n_elements: Number of elements (>= 1)
    """
    a: float
    b: float
    n_elements: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"Mesh needs a < b, got [{self.a}, {self.b}]")
        if self.n_elements < 1:
            raise ValueError(f"Mesh needs at least one element, got {self.n_elements}")

    @property
    def h(self) -> float:
        """Element width."""
        return (self.b - self.a) / self.n_elements

    @property
    def vertices(self) -> np.ndarray:
        vertices = self.a + self.h * np.arange(self.n_elements + 1)
        vertices[-1] = self.b
        return vertices

    def refined(self) -> "Mesh1D":
        """Mesh with every element split in two."""
        return Mesh1D(self.a, self.b, 2 * self.n_elements)

    def locate(self, points: np.ndarray) -> np.ndarray:
        """
        Element index containing each point.

        Points on an interior vertex are assigned to the element on their
        right, the right endpoint b to the last element. Points outside
        [a, b] are clipped to the boundary elements.
        """
        points = np.asarray(points, dtype=float)
        index = np.floor((points - self.a) / self.h).astype(int)
        return np.clip(index, 0, self.n_elements - 1)
