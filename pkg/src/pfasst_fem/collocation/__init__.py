"""
Collocation Package

Right Gauss-Radau nodes, the spectral quadrature matrix Q and the
backward-Euler Q_Δ used by the SDC sweeps.

Usage:
    from src.pfasst_fem.collocation import CollocationTable

    table = CollocationTable.radau_right(4)
    table.tau, table.Q, table.QDelta
"""

from .tables import CollocationTable, radau_nodes, build_Q, build_QDelta_BE, MIN_NODES, MAX_NODES

__all__ = [
    "CollocationTable",
    "radau_nodes",
    "build_Q",
    "build_QDelta_BE",
    "MIN_NODES",
    "MAX_NODES",
]
