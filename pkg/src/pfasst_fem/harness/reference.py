"""
Reference solutions and error measurement.

The reference of a study is serial SDC in tolerance mode on the same space
as the runs under test, with a step dt_factor times smaller than the
smallest studied step. Errors are ∞-norms of coefficient differences at the
final time.
"""

from logging import getLogger
from typing import Optional

import numpy as np

from ..collocation import CollocationTable
from ..fem_space import LagrangeSpace, build_operators
from ..numerics import DEFAULT_TOL
from ..problems import ReactionDiffusionSpec
from ..sdc import Formulation, StepProblem, run_sdc_serial
from .config import ReferenceSettings, steps_for
from .reference_cache import ReferenceCache

logger = getLogger(__name__)


def reference_params(
    spec: ReactionDiffusionSpec,
    space: LagrangeSpace,
    nodes: int,
    dt_ref: float,
    settings: ReferenceSettings,
) -> dict:
    return {
        "problem": spec.name,
        "domain": [spec.a, spec.b],
        "horizon": [spec.t0, spec.t_end],
        "bc_mode": spec.bc_mode.value,
        "order": space.order,
        "elements": space.n_elements,
        "nodes": nodes,
        "dt_ref": dt_ref,
        "tolerance": settings.tolerance,
    }


def reference_solution(
    spec: ReactionDiffusionSpec,
    space: LagrangeSpace,
    nodes: int,
    dt_min: float,
    settings: Optional[ReferenceSettings] = None,
    cache: Optional[ReferenceCache] = None,
    progress: bool = False,
) -> np.ndarray:
    """
    Final-time reference vector on `space`.

    Args:
        spec: Problem definition
        space: Space of the runs under test
        nodes: Radau nodes per step
        dt_min: Smallest studied step size
        settings: Reference step factor and residual tolerance
        cache: Optional reference cache
        progress: Show a progress bar over the reference steps

    Raises:
        CollocationConvergenceError, SweepError: reference run failed
    """
    settings = settings or ReferenceSettings()
    dt_ref = dt_min / settings.dt_factor
    n_steps = steps_for(dt_ref, spec.duration)
    params = reference_params(spec, space, nodes, dt_ref, settings)

    if cache is not None:
        cached = cache.load(params)
        if cached is not None:
            return cached

    logger.info(
        f"Computing reference on {space.describe()}: {n_steps} steps of dt={dt_ref:g}, "
        f"residual tol {settings.tolerance:.0e}"
    )
    problem = StepProblem(
        ops=build_operators(space, spec.bc_mode),
        g=spec.g,
        g_prime=spec.g_prime,
        table=CollocationTable.radau_right(nodes),
        dt=dt_ref,
        formulation=Formulation.MASS,
        newton_tol=min(DEFAULT_TOL, settings.tolerance / 10),
    )
    u_ref = run_sdc_serial(
        problem,
        spec.initial_state(space),
        n_steps,
        residual_tol=settings.tolerance,
        progress=progress,
    )
    if cache is not None:
        cache.store(params, u_ref)
    return u_ref


def error_inf(u: np.ndarray, u_ref: np.ndarray) -> float:
    """max_i |u_i - u_ref_i|."""
    u = np.asarray(u, dtype=float)
    u_ref = np.asarray(u_ref, dtype=float)
    if u.shape != u_ref.shape:
        raise ValueError(f"Cannot compare vectors of shapes {u.shape} and {u_ref.shape}")
    return float(np.max(np.abs(u - u_ref)))
