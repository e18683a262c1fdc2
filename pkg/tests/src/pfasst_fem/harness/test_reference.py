"""
Tests for reference solutions, error measurement and the reference cache.
"""

import numpy as np
import pytest

from src.pfasst_fem.collocation import CollocationTable
from src.pfasst_fem.fem_space import build_operators
from src.pfasst_fem.harness import ReferenceCache, ReferenceSettings, cache_key, error_inf, reference_solution
from src.pfasst_fem.harness import reference as reference_module
from src.pfasst_fem.sdc import StepProblem, run_sdc_serial

PARAMS = {"problem": "zeldovich", "order": 1, "elements": 8, "dt_ref": 0.0625, "domain": [-20.0, 20.0]}


class TestErrorInf:
    """∞-norm of coefficient differences."""

    def test_value(self):
        assert error_inf(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.5, 2.0])) == 1.0

    def test_zero(self):
        assert error_inf(np.ones(4), np.ones(4)) == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            error_inf(np.ones(3), np.ones(4))


class TestReferenceCache:
    """msgpack entries keyed by a parameter hash."""

    def test_key_ignores_order(self):
        reordered = dict(reversed(list(PARAMS.items())))
        assert cache_key(reordered) == cache_key(PARAMS)
        assert cache_key({**PARAMS, "elements": 16}) != cache_key(PARAMS)

    def test_roundtrip(self, tmp_path, rng):
        cache = ReferenceCache(tmp_path / "refs")
        values = rng.standard_normal(9)
        path = cache.store(PARAMS, values)
        assert path.exists()
        np.testing.assert_array_equal(cache.load(PARAMS), values)

    def test_miss(self, tmp_path):
        assert ReferenceCache(tmp_path).load(PARAMS) is None

    def test_corrupt_entry(self, tmp_path):
        cache = ReferenceCache(tmp_path)
        cache.path_for_key(cache_key(PARAMS)).write_bytes(b"\xc1not msgpack")
        assert cache.load(PARAMS) is None

    def test_parameter_mismatch(self, tmp_path):
        cache = ReferenceCache(tmp_path)
        path = cache.store({**PARAMS, "elements": 16}, np.zeros(17))
        path.rename(cache.path_for_key(cache_key(PARAMS)))
        assert cache.load(PARAMS) is None


class TestReferenceSolution:
    """Tolerance-mode serial SDC at a reduced step."""

    SETTINGS = ReferenceSettings(dt_factor=2, tolerance=1e-10)

    def test_matches_serial_sdc(self, zeldovich_problem):
        space = zeldovich_problem.space(8, 1)
        u_ref = reference_solution(zeldovich_problem, space, nodes=2, dt_min=0.5, settings=self.SETTINGS)
        problem = StepProblem(
            ops=build_operators(space),
            g=zeldovich_problem.g,
            g_prime=zeldovich_problem.g_prime,
            table=CollocationTable.radau_right(2),
            dt=0.25,
        )
        expected = run_sdc_serial(problem, zeldovich_problem.initial_state(space), 8, residual_tol=1e-10)
        np.testing.assert_array_equal(u_ref, expected)

    def test_cached_reference_is_reused(self, zeldovich_problem, tmp_path, monkeypatch):
        space = zeldovich_problem.space(8, 1)
        cache = ReferenceCache(tmp_path)
        first = reference_solution(zeldovich_problem, space, 2, 0.5, self.SETTINGS, cache=cache)
        assert len(list(tmp_path.glob("reference_*.msgpack"))) == 1

        def fail(*args, **kwargs):
            raise AssertionError("reference recomputed despite cache entry")

        monkeypatch.setattr(reference_module, "run_sdc_serial", fail)
        second = reference_solution(zeldovich_problem, space, 2, 0.5, self.SETTINGS, cache=cache)
        np.testing.assert_array_equal(second, first)

    def test_other_space_misses_cache(self, zeldovich_problem, tmp_path):
        cache = ReferenceCache(tmp_path)
        reference_solution(zeldovich_problem, zeldovich_problem.space(8, 1), 2, 0.5, self.SETTINGS, cache=cache)
        reference_solution(zeldovich_problem, zeldovich_problem.space(4, 1), 2, 0.5, self.SETTINGS, cache=cache)
        assert len(list(tmp_path.glob("reference_*.msgpack"))) == 2
