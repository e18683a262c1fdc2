"""
Problems Package

Reaction-diffusion problem definitions: the Zeldovich-type equation
u_t = u_xx + u^2 (1 - u) with its traveling-front initial profile.
"""

from .reaction_diffusion import (
    ReactionDiffusionSpec,
    zeldovich,
    zeldovich_reaction,
    zeldovich_reaction_derivative,
    initial_profile,
    interpolate,
)

__all__ = [
    "ReactionDiffusionSpec",
    "zeldovich",
    "zeldovich_reaction",
    "zeldovich_reaction_derivative",
    "initial_profile",
    "interpolate",
]
