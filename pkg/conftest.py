"""
Shared pytest fixtures: the Zeldovich problem, small FE spaces and a
factory for single-step collocation problems.
"""

import numpy as np
import pytest

from src.pfasst_fem.collocation import CollocationTable
from src.pfasst_fem.fem_space import BoundaryMode, LagrangeSpace, build_operators
from src.pfasst_fem.problems import zeldovich
from src.pfasst_fem.sdc import Formulation, StepProblem


@pytest.fixture(scope="session")
def zeldovich_problem():
    return zeldovich()


@pytest.fixture(scope="session")
def p1_space():
    return LagrangeSpace.uniform(0.0, 1.0, 4, 1)


@pytest.fixture(scope="session")
def p2_space():
    return LagrangeSpace.uniform(0.0, 1.0, 3, 2)


@pytest.fixture(scope="session")
def p3_space():
    return LagrangeSpace.uniform(0.0, 1.0, 3, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def make_step_problem(zeldovich_problem):
    """
    Build a Zeldovich StepProblem on a small space.

    Keywords: elements, order, dt, nodes, formulation, bc_mode.
    """
    def factory(
        elements: int = 16,
        order: int = 2,
        dt: float = 0.5,
        nodes: int = 4,
        formulation: Formulation = Formulation.MASS,
        bc_mode: BoundaryMode = BoundaryMode.NATURAL,
    ) -> StepProblem:
        space = zeldovich_problem.space(elements, order)
        return StepProblem(
            ops=build_operators(space, bc_mode),
            g=zeldovich_problem.g,
            g_prime=zeldovich_problem.g_prime,
            table=CollocationTable.radau_right(nodes),
            dt=dt,
            formulation=formulation,
        )
    return factory
