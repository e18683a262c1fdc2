"""
Tests for the two-level hierarchy, the FAS correction and PFASST runs.
"""

import dataclasses
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from src.pfasst_fem.collocation import CollocationTable
from src.pfasst_fem.errors import ConfigurationError, NonNestedSpacesError, SweepError
from src.pfasst_fem.fem_space import LagrangeSpace, TransferPair, build_operators
from src.pfasst_fem.pfasst import (
    CompositeOperator,
    TwoLevelHierarchy,
    composite_residual,
    fas_tau,
    pfasst_iteration,
    run_pfasst,
    sweep_parallel,
    sweep_sequential,
)
from src.pfasst_fem.sdc import Formulation, StepProblem, run_sdc_serial, solve_collocation


def tight(problem: StepProblem) -> StepProblem:
    return dataclasses.replace(problem, newton_tol=1e-13)


def composite_solution(op, u00, tol=1e-12):
    blocks, start = [], u00
    for _ in range(op.n_steps):
        U = solve_collocation(op.problem, start, residual_tol=tol)
        blocks.append(U)
        start = U[-1]
    return np.stack(blocks)


def linear_heat(space, dt: float) -> StepProblem:
    return StepProblem(
        ops=build_operators(space),
        g=np.zeros_like,
        g_prime=np.zeros_like,
        table=CollocationTable.radau_right(3),
        dt=dt,
        newton_tol=1e-14,
    )


@pytest.fixture
def hierarchy(make_step_problem):
    fine = tight(make_step_problem(elements=8, order=2, dt=0.25))
    coarse = tight(make_step_problem(elements=8, order=1, dt=0.25))
    return TwoLevelHierarchy.build(fine, coarse, n_steps=2)


@pytest.fixture
def u00(hierarchy, zeldovich_problem):
    return zeldovich_problem.initial_state(hierarchy.fine.problem.ops.space)


class TestHierarchyValidation:
    """Both levels must agree on everything but the space."""

    def test_build(self, hierarchy):
        assert hierarchy.n_steps == 2
        assert hierarchy.formulation is Formulation.MASS
        assert hierarchy.transfer.injection.shape == (17, 9)

    def test_block_size_mismatch(self, hierarchy):
        with pytest.raises(ConfigurationError):
            TwoLevelHierarchy(hierarchy.fine, CompositeOperator(hierarchy.coarse.problem, 4), hierarchy.transfer)

    def test_node_mismatch(self, hierarchy, make_step_problem):
        coarse = make_step_problem(elements=8, order=1, dt=0.25, nodes=3)
        with pytest.raises(ConfigurationError):
            TwoLevelHierarchy.build(hierarchy.fine.problem, coarse, n_steps=2)

    def test_dt_mismatch(self, hierarchy, make_step_problem):
        coarse = make_step_problem(elements=8, order=1, dt=0.5)
        with pytest.raises(ConfigurationError):
            TwoLevelHierarchy.build(hierarchy.fine.problem, coarse, n_steps=2)

    def test_formulation_mismatch(self, hierarchy, make_step_problem):
        coarse = make_step_problem(elements=8, order=1, dt=0.25, formulation=Formulation.MASS_INVERTED)
        with pytest.raises(ConfigurationError):
            TwoLevelHierarchy.build(hierarchy.fine.problem, coarse, n_steps=2)

    def test_foreign_transfer(self, hierarchy):
        transfer = TransferPair.build(LagrangeSpace.uniform(-20.0, 20.0, 4, 1), LagrangeSpace.uniform(-20.0, 20.0, 8, 1))
        with pytest.raises(ConfigurationError):
            TwoLevelHierarchy(hierarchy.fine, hierarchy.coarse, transfer)

    def test_non_nested_spaces(self, hierarchy, make_step_problem):
        coarse = make_step_problem(elements=3, order=1, dt=0.25)
        with pytest.raises(NonNestedSpacesError):
            TwoLevelHierarchy.build(hierarchy.fine.problem, coarse, n_steps=2)


class TestResidualRestriction:
    """Dual vectors go through (T^N)^T, primal-unit residuals through R^N."""

    def test_mass_uses_injection_transpose(self, hierarchy, rng):
        r = rng.standard_normal(hierarchy.fine.shape)
        expected = np.einsum("ij,lmi->lmj", hierarchy.transfer.injection.toarray(), r)
        np.testing.assert_allclose(hierarchy.restrict_residual(r), expected, atol=1e-14)

    def test_mass_inverted_uses_restriction(self, make_step_problem, rng):
        fine = make_step_problem(elements=8, order=2, dt=0.25, formulation=Formulation.MASS_INVERTED)
        coarse = make_step_problem(elements=8, order=1, dt=0.25, formulation=Formulation.MASS_INVERTED)
        h = TwoLevelHierarchy.build(fine, coarse, n_steps=2)
        r = rng.standard_normal(h.fine.shape)
        np.testing.assert_array_equal(h.restrict_residual(r), h.restrict(r))


class TestFASCorrection:
    """τ makes the restricted fine solution a coarse solution."""

    def test_zero_on_identical_levels(self, make_step_problem, u00, rng):
        problem = tight(make_step_problem(elements=8, order=2, dt=0.25))
        h = TwoLevelHierarchy.build(problem, problem, n_steps=2)
        U = h.fine.spread(u00) + 0.01 * rng.standard_normal(h.fine.shape)
        assert not fas_tau(h, U, u00).any()

    def test_restricted_solution_solves_corrected_problem(self, hierarchy, u00):
        U = composite_solution(hierarchy.fine, u00)
        tau = fas_tau(hierarchy, U, u00)
        U_coarse = hierarchy.restrict(U)
        residual = composite_residual(hierarchy.coarse, U_coarse, hierarchy.restrict(u00), tau)
        assert np.max(np.abs(residual)) <= 1e-11

    def test_coarse_iteration_converges_to_restricted_solution(self, hierarchy, u00):
        U = composite_solution(hierarchy.fine, u00)
        tau = fas_tau(hierarchy, U, u00)
        coarse_u00 = hierarchy.restrict(u00)
        V = hierarchy.coarse.spread(coarse_u00)
        for _ in range(60):
            V = sweep_sequential(hierarchy.coarse, V, coarse_u00, tau)
        np.testing.assert_allclose(V, hierarchy.restrict(U), rtol=0, atol=1e-9)

    def test_linear_dense_oracle(self, rng):
        fine = linear_heat(LagrangeSpace.uniform(0.0, 1.0, 8, 2), 0.3)
        coarse = linear_heat(LagrangeSpace.uniform(0.0, 1.0, 4, 2), 0.3)
        h = TwoLevelHierarchy.build(fine, coarse, n_steps=1)
        U = rng.standard_normal(h.fine.shape)
        u00 = rng.standard_normal(fine.n_dofs)

        def dense_residual(problem, V, v0):
            M = problem.ops.mass.to_dense()
            A = problem.ops.stiffness.to_dense()
            Q = problem.table.Q
            return np.stack([
                M @ V[m] + problem.dt * sum(Q[m, j] * (A @ V[j]) for j in range(Q.shape[0])) - M @ v0
                for m in range(Q.shape[0])
            ])

        T = h.transfer.injection.toarray()
        R = h.transfer.restriction.toarray()
        expected = dense_residual(coarse, U[0] @ R.T, R @ u00) - dense_residual(fine, U[0], u00) @ T
        np.testing.assert_allclose(fas_tau(h, U, u00)[0], expected, rtol=0, atol=1e-12)


class TestPFASSTIteration:
    """Single iterations on one block."""

    def test_same_level_reduces_to_two_sweeps(self, make_step_problem, u00, rng):
        problem = tight(make_step_problem(elements=8, order=2, dt=0.25))
        h = TwoLevelHierarchy.build(problem, problem, n_steps=2)
        U = h.fine.spread(u00) + 0.001 * rng.standard_normal(h.fine.shape)
        expected = sweep_parallel(h.fine, sweep_sequential(h.fine, U, u00), u00)
        np.testing.assert_allclose(pfasst_iteration(h, U, u00), expected, rtol=0, atol=1e-10)

    def test_fixed_point(self, hierarchy, u00):
        U = composite_solution(hierarchy.fine, u00)
        assert np.max(np.abs(pfasst_iteration(hierarchy, U, u00) - U)) <= 1e-8

    def test_residual_decreases(self, hierarchy, u00):
        U = hierarchy.fine.spread(u00)
        norms = []
        for _ in range(4):
            norms.append(np.max(np.abs(composite_residual(hierarchy.fine, U, u00))))
            U = pfasst_iteration(hierarchy, U, u00)
        assert norms[-1] < 0.1 * norms[0]

    def test_deterministic_under_threads(self, hierarchy, u00):
        U = hierarchy.fine.spread(u00)
        serial = pfasst_iteration(hierarchy, U, u00)
        with ThreadPoolExecutor(max_workers=2) as executor:
            np.testing.assert_array_equal(pfasst_iteration(hierarchy, U, u00, executor=executor), serial)

    def test_failure_tagged_with_level(self, hierarchy, u00):
        broken = dataclasses.replace(hierarchy.coarse.problem, g=lambda u: np.full_like(u, np.nan))
        h = TwoLevelHierarchy(hierarchy.fine, CompositeOperator(broken, 2), hierarchy.transfer)
        with pytest.raises(SweepError) as info:
            pfasst_iteration(h, h.fine.spread(u00), u00)
        assert info.value.level == "coarse"
        assert info.value.step == 0
        assert info.value.node == 0


class TestRunPFASST:
    """Block-by-block runs."""

    def test_zero_iterations_keep_initial_value(self, hierarchy, u00):
        np.testing.assert_array_equal(run_pfasst(hierarchy, u00, n_steps=4, k_iters=0), u00)

    def test_steps_must_fill_blocks(self, hierarchy, u00):
        with pytest.raises(ValueError):
            run_pfasst(hierarchy, u00, n_steps=3, k_iters=1)

    def test_mode_arguments(self, hierarchy, u00):
        with pytest.raises(ValueError):
            run_pfasst(hierarchy, u00, n_steps=2)
        with pytest.raises(ValueError):
            run_pfasst(hierarchy, u00, n_steps=2, k_iters=1, residual_tol=1e-8)

    def test_tolerance_mode_matches_serial_sdc(self, make_step_problem, zeldovich_problem):
        fine = tight(make_step_problem(elements=16, order=2, dt=0.25))
        coarse = tight(make_step_problem(elements=16, order=1, dt=0.25))
        h = TwoLevelHierarchy.build(fine, coarse, n_steps=4)
        u0 = zeldovich_problem.initial_state(fine.ops.space)
        u_pfasst = run_pfasst(h, u0, n_steps=8, residual_tol=1e-10, max_iters=25)
        u_sdc = run_sdc_serial(fine, u0, n_steps=8, residual_tol=1e-11)
        np.testing.assert_allclose(u_pfasst, u_sdc, rtol=0, atol=1e-8)

    def test_threads_do_not_change_result(self, hierarchy, u00):
        serial = run_pfasst(hierarchy, u00, n_steps=4, k_iters=2)
        with ThreadPoolExecutor(max_workers=2) as executor:
            threaded = run_pfasst(hierarchy, u00, n_steps=4, k_iters=2, executor=executor)
        np.testing.assert_array_equal(threaded, serial)
