"""
Tests for Radau nodes and the collocation matrices Q and Q_Δ.
"""

import numpy as np
import pytest
from numpy.polynomial.legendre import Legendre

from src.pfasst_fem.collocation import CollocationTable, build_Q, build_QDelta_BE, radau_nodes
from src.pfasst_fem.errors import UnsupportedNodeCountError


def dahlquist_collocation(z, table):
    """Last-node value of the collocation solution of u' = λu, u(0) = 1, with z = λΔt."""
    U = np.linalg.solve(np.eye(table.M) - z * table.Q, np.ones(table.M))
    return U[-1]


class TestRadauNodes:
    """Right Gauss-Radau abscissae on (0, 1]."""

    def test_single_node(self):
        np.testing.assert_array_equal(radau_nodes(1), [1.0])

    def test_three_nodes_closed_form(self):
        expected = [(4 - np.sqrt(6)) / 10, (4 + np.sqrt(6)) / 10, 1.0]
        np.testing.assert_allclose(radau_nodes(3), expected, rtol=0, atol=1e-13)

    def test_four_nodes(self):
        np.testing.assert_allclose(radau_nodes(4), [0.088588, 0.409467, 0.787659, 1.0], atol=5e-7)

    @pytest.mark.parametrize("M", range(2, 10))
    def test_matches_polynomial_roots(self, M):
        roots = np.sort((Legendre.basis(M) - Legendre.basis(M - 1)).roots().real)
        expected = 0.5 * (roots + 1.0)
        nodes = radau_nodes(M)
        np.testing.assert_allclose(nodes, expected, rtol=0, atol=1e-10)
        assert nodes[-1] == 1.0
        assert nodes[0] > 0.0 and np.all(np.diff(nodes) > 0)

    @pytest.mark.parametrize("M", [0, 10, -1, 2.5])
    def test_unsupported_count(self, M):
        with pytest.raises(UnsupportedNodeCountError):
            radau_nodes(M)


class TestQuadratureMatrix:
    """Q[m, j] = ∫_0^{τ_m} L_j."""

    def test_single_node(self):
        np.testing.assert_allclose(build_Q(np.array([1.0])), [[1.0]])

    @pytest.mark.parametrize("M", range(1, 10))
    def test_row_sums_are_nodes(self, M):
        tau = radau_nodes(M)
        np.testing.assert_allclose(build_Q(tau).sum(axis=1), tau, rtol=0, atol=1e-12)

    def test_last_row_integrates_cubic(self):
        tau = radau_nodes(4)
        assert build_Q(tau)[-1] @ tau**3 == pytest.approx(0.25, abs=1e-13)

    @pytest.mark.parametrize("M", [2, 4, 7])
    def test_exact_for_low_degree_polynomials(self, M):
        tau = radau_nodes(M)
        Q = build_Q(tau)
        for degree in range(M):
            np.testing.assert_allclose(Q @ tau**degree, tau ** (degree + 1) / (degree + 1), rtol=0, atol=1e-12)

    def test_arbitrary_nodes(self):
        tau = np.array([0.25, 0.5, 1.0])
        Q = build_Q(tau)
        np.testing.assert_allclose(Q @ tau**2, tau**3 / 3, atol=1e-14)

    @pytest.mark.parametrize("tau", [[0.0, 1.0], [0.5, 0.5, 1.0], [0.2, 1.1], [0.6, 0.3]])
    def test_invalid_nodes(self, tau):
        with pytest.raises(ValueError):
            build_Q(np.array(tau))


class TestBackwardEulerQDelta:
    """Lower-triangular right-rectangle rule."""

    def test_single_node(self):
        np.testing.assert_array_equal(build_QDelta_BE(np.array([1.0])), [[1.0]])

    def test_two_nodes(self):
        np.testing.assert_allclose(build_QDelta_BE(np.array([1 / 3, 1.0])), [[1 / 3, 0.0], [1 / 3, 2 / 3]])

    @pytest.mark.parametrize("M", range(1, 10))
    def test_structure_and_row_sums(self, M):
        tau = radau_nodes(M)
        QDelta = build_QDelta_BE(tau)
        assert not np.triu(QDelta, 1).any()
        assert np.all(np.diag(QDelta) > 0)
        np.testing.assert_allclose(QDelta.sum(axis=1), tau, atol=1e-14)


class TestCollocationTable:
    """Assembled tables and collocation accuracy."""

    def test_radau_table(self):
        table = CollocationTable.radau_right(4)
        assert table.M == 4
        assert table.dtau.sum() == pytest.approx(1.0, abs=1e-15)
        np.testing.assert_allclose(table.Q.sum(axis=1), table.QDelta.sum(axis=1), atol=1e-12)
        assert table.matches(CollocationTable.radau_right(4))
        assert not table.matches(CollocationTable.radau_right(3))

    def test_tables_are_read_only(self):
        table = CollocationTable.radau_right(3)
        with pytest.raises(ValueError):
            table.Q[0, 0] = 1.0

    def test_collocation_order(self):
        # Radau IIA with M nodes has local error O(Δt^{2M}).
        table = CollocationTable.radau_right(4)
        dts = np.array([1.6, 0.8, 0.4, 0.2])
        errors = np.array([abs(dahlquist_collocation(-dt, table) - np.exp(-dt)) for dt in dts])
        slope = np.polyfit(np.log2(dts), np.log2(errors), 1)[0]
        assert slope >= 6.5
