"""
Tests for study rows, slope fitting, CSV output and small studies.
"""

import io

import numpy as np
import pytest

from src.pfasst_fem.errors import NewtonConvergenceError
from src.pfasst_fem.harness import CSV_HEADER, Method, StudyConfig, StudyRow, fit_slopes, run_study, write_csv
from src.pfasst_fem.harness import study as study_module


def row(dt, k, error, method="sdc"):
    return StudyRow(method=method, order=3, elements=128, dt=dt, k=k, error_inf=error)


def small_config(**overrides) -> StudyConfig:
    settings = {
        "method": "sdc",
        "order": 1,
        "elements": 8,
        "dt_list": [0.5, 0.25],
        "k_list": [1, 2],
        "nodes": 2,
        "reference": {"dt_factor": 2, "tolerance": 1e-10},
    }
    settings.update(overrides)
    return StudyConfig(**settings)


class TestStudyRow:
    """CSV formatting of single points."""

    def test_csv_line(self):
        assert row(0.5, 1, 1.18369e-2).csv_line() == "sdc,3,128,0.5,1,1.18369e-02"
        assert row(0.03125, 5, 3.55e-13, "pfasst").csv_line() == "pfasst,3,128,0.03125,5,3.55000e-13"

    def test_failed_row(self):
        failed = row(0.5, 1, None)
        assert failed.failed
        assert failed.csv_line().endswith(",failed")

    def test_write_csv(self):
        stream = io.StringIO()
        write_csv([row(0.5, 1, 1e-2), row(0.25, 1, 5e-3)], stream)
        lines = stream.getvalue().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3


class TestFitSlopes:
    """log2 least-squares slopes per k."""

    def test_exact_power_laws(self):
        dts = [0.5, 0.25, 0.125, 0.0625]
        rows = [row(dt, k, 3.0 * dt ** k) for k in (1, 2, 3) for dt in dts]
        slopes = fit_slopes(rows)
        assert list(slopes) == [1, 2, 3]
        for k, slope in slopes.items():
            assert slope == pytest.approx(k, abs=1e-10)

    def test_skips_failed_and_single_points(self):
        rows = [row(0.5, 1, 1e-2), row(0.25, 1, None), row(0.125, 1, 2.5e-3), row(0.5, 2, 1e-3)]
        slopes = fit_slopes(rows)
        assert slopes == {1: pytest.approx(1.0)}


class TestRunStudy:
    """Small end-to-end studies."""

    def test_sdc_rows_in_order(self):
        rows = run_study(small_config(), progress=False)
        assert [(r.k, r.dt) for r in rows] == [(1, 0.5), (1, 0.25), (2, 0.5), (2, 0.25)]
        assert all(r.method is Method.SDC and not r.failed and r.error_inf > 0 for r in rows)
        # More sweeps at the same step are more accurate.
        assert rows[2].error_inf < rows[0].error_inf

    def test_pfasst_improves_with_iterations(self):
        cfg = small_config(method="pfasst", order=2, dt_list=[0.5], k_list=[1, 4], nodes=3)
        rows = run_study(cfg, progress=False)
        assert rows[1].error_inf < rows[0].error_inf

    def test_workers_do_not_change_rows(self):
        serial = run_study(small_config(), progress=False)
        pooled = run_study(small_config(workers=2), progress=False)
        assert pooled == serial

    def test_numerical_failure_becomes_failed_row(self, monkeypatch):
        def fail(cfg, spec, dt, k):
            if k == 2:
                raise NewtonConvergenceError("diverged", iterations=50, residual_norm=np.inf)
            return spec.initial_state(spec.space(cfg.elements, cfg.order))

        monkeypatch.setattr(study_module, "solve_point", fail)
        rows = run_study(small_config(), progress=False)
        assert [r.failed for r in rows] == [False, False, True, True]
