"""
Harness Package

Convergence-study driver: validated study configuration, same-space
reference solutions (with an optional msgpack cache), error measurement,
slope fitting, CSV output and the command-line interface.

Usage:
    python -m src.pfasst_fem.harness.cli study --config configs/sdc_p3.cfg --out sdc_p3.csv
"""

from .config import (
    Method,
    Coarsening,
    ReferenceSettings,
    StudyConfig,
    load_config,
    parse_config_text,
    steps_for,
)
from .reference import reference_solution, error_inf
from .reference_cache import ReferenceCache, cache_key
from .study import StudyRow, run_study, run_point, solve_point, fit_slopes, write_csv, CSV_HEADER

__all__ = [
    "Method",
    "Coarsening",
    "ReferenceSettings",
    "StudyConfig",
    "load_config",
    "parse_config_text",
    "steps_for",
    "reference_solution",
    "error_inf",
    "ReferenceCache",
    "cache_key",
    "StudyRow",
    "run_study",
    "run_point",
    "solve_point",
    "fit_slopes",
    "write_csv",
    "CSV_HEADER",
]
