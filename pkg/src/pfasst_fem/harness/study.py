"""
Convergence studies: run a method over a grid of (dt, k), measure the
final-time error against a same-space reference, fit log2 slopes and write
CSV rows.

Study points are independent and may run on a process pool; rows always
come back in configuration order (k-major, then dt).
"""

import multiprocessing
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from logging import getLogger
from typing import Dict, Iterable, List, Optional, TextIO

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from ..collocation import CollocationTable
from ..errors import NumericalError
from ..fem_space import LagrangeSpace, build_operators
from ..pfasst import TwoLevelHierarchy, run_pfasst
from ..problems import ReactionDiffusionSpec, zeldovich
from ..sdc import StepProblem, run_sdc_serial
from .config import Method, StudyConfig, steps_for
from .reference import error_inf, reference_solution
from .reference_cache import ReferenceCache

logger = getLogger(__name__)

CSV_HEADER = "method,order,elements,dt,k,error_inf"
FAILED = "failed"


class StudyRow(BaseModel):
    """One measured point of a study; error_inf is None when the run failed."""
    model_config = ConfigDict(frozen=True)

    method: Method
    order: int = Field(..., ge=1, le=3)
    elements: int = Field(..., ge=1)
    dt: float = Field(..., gt=0)
    k: int = Field(..., ge=0)
    error_inf: Optional[float] = Field(default=None, ge=0)

    @property
    def failed(self) -> bool:
        return self.error_inf is None

    def csv_line(self) -> str:
        error = FAILED if self.failed else f"{self.error_inf:.5e}"
        return f"{self.method.value},{self.order},{self.elements},{self.dt:g},{self.k},{error}"


def build_step_problem(
    cfg: StudyConfig,
    spec: ReactionDiffusionSpec,
    space: LagrangeSpace,
    dt: float,
) -> StepProblem:
    return StepProblem(
        ops=build_operators(space, spec.bc_mode),
        g=spec.g,
        g_prime=spec.g_prime,
        table=CollocationTable.radau_right(cfg.nodes),
        dt=dt,
        formulation=cfg.formulation,
    )


def build_hierarchy(cfg: StudyConfig, spec: ReactionDiffusionSpec, dt: float) -> TwoLevelHierarchy:
    coarse_elements, coarse_order = cfg.coarse_discretization
    fine = build_step_problem(cfg, spec, spec.space(cfg.elements, cfg.order), dt)
    coarse = build_step_problem(cfg, spec, spec.space(coarse_elements, coarse_order), dt)
    return TwoLevelHierarchy.build(fine, coarse, cfg.block)


def solve_point(cfg: StudyConfig, spec: ReactionDiffusionSpec, dt: float, k: int) -> np.ndarray:
    """Final-time state of the configured method for one (dt, k)."""
    space = spec.space(cfg.elements, cfg.order)
    u_initial = spec.initial_state(space)
    n_steps = steps_for(dt, spec.duration)
    if not cfg.method.is_pfasst:
        problem = build_step_problem(cfg, spec, space, dt)
        return run_sdc_serial(problem, u_initial, n_steps, k_iters=k)

    hierarchy = build_hierarchy(cfg, spec, dt)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
            return run_pfasst(hierarchy, u_initial, n_steps, k_iters=k, executor=executor)
    return run_pfasst(hierarchy, u_initial, n_steps, k_iters=k)


@dataclass(frozen=True)
class _PointTask:
    cfg: StudyConfig
    dt: float
    k: int
    u_ref: np.ndarray


def run_point(task: _PointTask) -> StudyRow:
    """Run one study point; numerical failures become a failed row."""
    cfg = task.cfg
    spec = zeldovich(cfg.bc_mode)
    try:
        error = error_inf(solve_point(cfg, spec, task.dt, task.k), task.u_ref)
    except NumericalError as exc:
        logger.warning(f"{cfg.method.value} dt={task.dt:g} k={task.k} failed: {exc}")
        error = None
    return StudyRow(
        method=cfg.method, order=cfg.order, elements=cfg.elements, dt=task.dt, k=task.k, error_inf=error
    )


def run_study(cfg: StudyConfig, progress: bool = True) -> List[StudyRow]:
    """
    Run every (dt, k) of the configuration.

    Raises:
        NumericalError: the reference solution could not be computed
    """
    spec = zeldovich(cfg.bc_mode)
    space = spec.space(cfg.elements, cfg.order)
    logger.info(f"Study {cfg.describe()}: dt={cfg.dt_list}, k={cfg.k_list}")

    cache = ReferenceCache(cfg.cache_dir) if cfg.cache_dir is not None else None
    u_ref = reference_solution(
        spec, space, cfg.nodes, min(cfg.dt_list), cfg.reference, cache=cache, progress=progress
    )

    tasks = [_PointTask(cfg, dt, k, u_ref) for k in cfg.k_list for dt in cfg.dt_list]
    bar = dict(total=len(tasks), desc=cfg.method.value, unit="point", disable=not progress)
    if cfg.workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=min(cfg.workers, len(tasks))) as pool:
            rows = list(tqdm(pool.imap(run_point, tasks), **bar))
    else:
        rows = [run_point(task) for task in tqdm(tasks, **bar)]
    return rows


def fit_slopes(rows: Iterable[StudyRow]) -> Dict[int, float]:
    """
    Least-squares slope of log2(error) against log2(dt) for every k.

    Failed rows and zero errors are skipped; k values with fewer than two
    usable points are omitted.
    """
    by_k: Dict[int, List[StudyRow]] = {}
    for row in rows:
        if not row.failed and row.error_inf > 0:
            by_k.setdefault(row.k, []).append(row)
    slopes = {}
    for k, points in sorted(by_k.items()):
        if len({row.dt for row in points}) < 2:
            continue
        log_dt = np.log2([row.dt for row in points])
        log_err = np.log2([row.error_inf for row in points])
        slopes[k] = float(np.polyfit(log_dt, log_err, 1)[0])
    return slopes


def write_csv(rows: Iterable[StudyRow], stream: TextIO):
    stream.write(CSV_HEADER + "\n")
    for row in rows:
        stream.write(row.csv_line() + "\n")
