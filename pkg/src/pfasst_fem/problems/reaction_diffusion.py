"""
Reaction-diffusion test problems v_t = v_xx + g(v).

The Zeldovich-type problem uses g(v) = v^2 (1 - v) on [-20, 20] x [0, 2]
with the traveling-front initial profile
    u(x, 0) = (1 + (sqrt(2) - 1) exp(-sqrt(6)/6 x))^-2.
Reaction terms are module-level functions so problems stay picklable for
process-parallel studies.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..fem_space import BoundaryMode, LagrangeSpace

ScalarFunction = Callable[[np.ndarray], np.ndarray]

_FRONT_SCALE = np.sqrt(2.0) - 1.0
_FRONT_RATE = np.sqrt(6.0) / 6.0


def zeldovich_reaction(v):
    """g(v) = v^2 (1 - v)."""
    return v * v * (1.0 - v)


def zeldovich_reaction_derivative(v):
    """g'(v) = 2v - 3v^2."""
    return 2.0 * v - 3.0 * v * v


def initial_profile(x):
    """Traveling-front profile (1 + (√2 - 1) e^{-√6/6 x})^-2, vectorized."""
    return (1.0 + _FRONT_SCALE * np.exp(-_FRONT_RATE * np.asarray(x, dtype=float))) ** -2


def interpolate(space: LagrangeSpace, function: ScalarFunction) -> np.ndarray:
    """Nodal interpolant of `function` in `space`."""
    return np.asarray(function(space.dof_coordinates), dtype=float)


@dataclass(frozen=True)
class ReactionDiffusionSpec:
    """
    Problem data of v_t = v_xx + g(v) on [a, b] x [t0, t_end].

    Attributes:
        name: Short identifier (used in cache keys and logs)
        a, b: Spatial domain
        t0, t_end: Time horizon
        g, g_prime: Reaction term and its derivative
        initial: Initial profile u(x, t0)
        bc_mode: Boundary treatment
    """
    name: str
    a: float
    b: float
    t0: float
    t_end: float
    g: ScalarFunction
    g_prime: ScalarFunction
    initial: ScalarFunction
    bc_mode: BoundaryMode = BoundaryMode.NATURAL

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"Domain needs a < b, got [{self.a}, {self.b}]")
        if not self.t0 < self.t_end:
            raise ValueError(f"Time horizon needs t0 < t_end, got [{self.t0}, {self.t_end}]")
        object.__setattr__(self, "bc_mode", BoundaryMode(self.bc_mode))

    @property
    def duration(self) -> float:
        return self.t_end - self.t0

    def space(self, n_elements: int, order: int) -> LagrangeSpace:
        return LagrangeSpace.uniform(self.a, self.b, n_elements, order)

    def initial_state(self, space: LagrangeSpace) -> np.ndarray:
        return interpolate(space, self.initial)


def zeldovich(bc_mode: BoundaryMode = BoundaryMode.NATURAL) -> ReactionDiffusionSpec:
    """u_t = u_xx + u^2 (1 - u) on [-20, 20] x [0, 2]."""
    return ReactionDiffusionSpec(
        name="zeldovich",
        a=-20.0,
        b=20.0,
        t0=0.0,
        t_end=2.0,
        g=zeldovich_reaction,
        g_prime=zeldovich_reaction_derivative,
        initial=initial_profile,
        bc_mode=bc_mode,
    )
