"""
FEM Space Package

1D Lagrange finite elements (orders 1-3): meshes, spaces, assembly of the
mass and stiffness matrices, the semidiscrete right-hand side
f(u) = -A u + M g(u), and transfer operators between nested spaces.

Usage:
    from src.pfasst_fem.fem_space import LagrangeSpace, build_operators, apply_f

    space = LagrangeSpace.uniform(-20.0, 20.0, n_elements=128, order=3)
    ops = build_operators(space)
    f = apply_f(ops, g, u)
"""

from .mesh import Mesh1D
from .space import LagrangeSpace, reference_basis, reference_basis_derivative, gauss_rule
from .assembly import assemble_mass, assemble_stiffness, nodal_nonlinearity, ScalarFunction
from .operators import BoundaryMode, SpatialOperators, build_operators, apply_f, jacobian_f
from .transfer import (
    TransferPair,
    build_injection,
    build_interp_restriction,
    is_nested,
    apply_rows,
)

__all__ = [
    "Mesh1D",
    "LagrangeSpace",
    "reference_basis",
    "reference_basis_derivative",
    "gauss_rule",
    "assemble_mass",
    "assemble_stiffness",
    "nodal_nonlinearity",
    "ScalarFunction",
    "BoundaryMode",
    "SpatialOperators",
    "build_operators",
    "apply_f",
    "jacobian_f",
    "TransferPair",
    "build_injection",
    "build_interp_restriction",
    "is_nested",
    "apply_rows",
]
