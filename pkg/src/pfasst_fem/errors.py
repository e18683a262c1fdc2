"""
Exception hierarchy for pfasst_fem.

Numerical failures derive from NumericalError (a RuntimeError), invalid
user input derives from ConfigurationError (a ValueError). The harness maps
the two families to process exit codes 1 and 2.
"""

from typing import Optional


class NumericalError(RuntimeError):
    """Base class for every failure of a numerical procedure."""


class SingularMatrixError(NumericalError):
    """A pivot fell below the singularity threshold during factorization."""

    def __init__(self, message: str, pivot_index: Optional[int] = None):
        super().__init__(message)
        self.pivot_index = pivot_index


class NewtonConvergenceError(NumericalError):
    """Newton's method did not reach the requested residual tolerance."""

    def __init__(self, message: str, iterations: int = 0, residual_norm: float = float("nan")):
        super().__init__(message)
        self.iterations = iterations
        self.residual_norm = residual_norm


class CollocationConvergenceError(NumericalError):
    """Tolerance-mode iteration hit its sweep/iteration cap."""

    def __init__(self, message: str, sweeps: int = 0, residual_norm: float = float("nan")):
        super().__init__(message)
        self.sweeps = sweeps
        self.residual_norm = residual_norm


class SweepError(NumericalError):
    """
    Failure inside an SDC sweep, tagged with where it happened.

    Tags are added while the error travels outwards: the node solve knows the
    node, the composite sweep adds the step, PFASST adds the level.
    """

    def __init__(
        self,
        message: str,
        level: Optional[str] = None,
        step: Optional[int] = None,
        node: Optional[int] = None,
    ):
        super().__init__(message)
        self.message = message
        self.level = level
        self.step = step
        self.node = node

    def with_context(self, **tags) -> "SweepError":
        """Return a copy carrying additional location tags (existing tags win)."""
        merged = {"level": self.level, "step": self.step, "node": self.node}
        for key, value in tags.items():
            if merged.get(key) is None:
                merged[key] = value
        error = SweepError(self.message, **merged)
        error.__cause__ = self.__cause__
        return error

    def __str__(self) -> str:
        where = [f"{k}={v}" for k, v in (("level", self.level), ("step", self.step), ("node", self.node)) if v is not None]
        suffix = f" [{', '.join(where)}]" if where else ""
        return f"{self.message}{suffix}"


class ConfigurationError(ValueError):
    """Invalid user input (spaces, node counts, study configuration)."""


class NonNestedSpacesError(ConfigurationError):
    """Transfer operators requested between spaces that are not nested."""


class UnsupportedNodeCountError(ConfigurationError):
    """Collocation node count outside the supported range."""
