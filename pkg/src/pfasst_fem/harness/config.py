"""
Validated configuration of convergence studies.

Study files are plain text with one `key = value` per line:

    # SDC on cubic elements
    method = sdc
    order = 3
    elements = 128
    dt_list = 0.5, 0.25, 0.125, 0.0625, 0.03125
    k_list = 1, 2, 3, 4, 5
    reference.dt_factor = 8

`#` starts a comment, list values are comma-separated, keys may be written
with `-` or `_`, and `reference.<field>` addresses the nested reference
settings. Unknown keys are rejected.
"""

from enum import Enum
from logging import getLogger
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..errors import ConfigurationError
from ..fem_space import BoundaryMode
from ..sdc import Formulation

logger = getLogger(__name__)

DEFAULT_DT_LIST = [0.5, 0.25, 0.125, 0.0625, 0.03125]
DEFAULT_K_LIST = [1, 2, 3, 4, 5]
HORIZON = 2.0  # t_end - t0 of the Zeldovich problem

_LIST_KEYS = {"dt_list", "k_list"}


class Method(str, Enum):
    SDC = "sdc"
    SDC_NAIVE = "sdc_naive"
    PFASST = "pfasst"
    PFASST_NAIVE = "pfasst_naive"

    @property
    def formulation(self) -> Formulation:
        """Naive variants work on M^-1 f instead of the mass-matrix system."""
        if self in (Method.SDC_NAIVE, Method.PFASST_NAIVE):
            return Formulation.MASS_INVERTED
        return Formulation.MASS

    @property
    def is_pfasst(self) -> bool:
        return self in (Method.PFASST, Method.PFASST_NAIVE)


class Coarsening(str, Enum):
    P = "p"  # same mesh, order - 1
    H = "h"  # same order, half the elements


class ReferenceSettings(BaseModel):
    """How the reference solution of a study is computed."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    dt_factor: int = Field(default=8, description="Reference step = smallest studied dt / dt_factor", ge=1)
    tolerance: float = Field(default=1e-13, description="Collocation residual tolerance of the reference run", gt=0)


class StudyConfig(BaseModel):
    """Configuration of one convergence study (one error-vs-step table)."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    method: Method = Field(..., description="Time integrator under test")
    order: int = Field(..., description="Polynomial order of the fine space", ge=1, le=3)
    elements: int = Field(..., description="Number of elements of the fine space", ge=1)
    coarsening: Optional[Coarsening] = Field(
        default=None, description="Coarse level for PFASST (default: p for order >= 2, else h)"
    )
    dt_list: List[float] = Field(default_factory=lambda: list(DEFAULT_DT_LIST), min_length=1)
    k_list: List[int] = Field(default_factory=lambda: list(DEFAULT_K_LIST), min_length=1)
    nodes: int = Field(default=4, description="Radau nodes per step", ge=1, le=9)
    block: int = Field(default=4, description="PFASST block size L", ge=1)
    bc_mode: BoundaryMode = Field(default=BoundaryMode.NATURAL)
    reference: ReferenceSettings = Field(default_factory=ReferenceSettings)
    workers: int = Field(default=1, description="Processes for study points", ge=1)
    threads: int = Field(default=1, description="Threads for the parallel fine sweep", ge=1)
    cache_dir: Optional[Path] = Field(default=None, description="Reference-solution cache directory")

    @field_validator("method", "coarsening", "bc_mode", mode="before")
    @classmethod
    def _normalize_enum_spelling(cls, value: Any) -> Any:
        if isinstance(value, str):
            return value.strip().lower().replace("-", "_")
        return value

    @field_validator("dt_list")
    @classmethod
    def _check_dt_list(cls, values: List[float]) -> List[float]:
        for dt in values:
            if not dt > 0:
                raise ValueError(f"step sizes must be positive, got {dt}")
            steps_for(dt)
        return values

    @field_validator("k_list")
    @classmethod
    def _check_k_list(cls, values: List[int]) -> List[int]:
        if any(k < 0 for k in values):
            raise ValueError(f"iteration counts must be >= 0, got {values}")
        return values

    @model_validator(mode="after")
    def _check_method_setup(self) -> "StudyConfig":
        if self.coarsening is None:
            object.__setattr__(self, "coarsening", Coarsening.P if self.order >= 2 else Coarsening.H)
        if not self.method.is_pfasst:
            return self
        for dt in self.dt_list:
            if steps_for(dt) % self.block:
                raise ValueError(f"dt={dt} gives {steps_for(dt)} steps, not divisible by block size {self.block}")
        if self.coarsening is Coarsening.P and self.order < 2:
            raise ValueError("p-coarsening needs a fine order >= 2")
        if self.coarsening is Coarsening.H and self.elements % 2:
            raise ValueError(f"h-coarsening needs an even number of elements, got {self.elements}")
        if self.threads > self.block:
            raise ValueError(f"threads ({self.threads}) must not exceed the block size ({self.block})")
        return self

    @property
    def coarse_discretization(self) -> Tuple[int, int]:
        """(elements, order) of the PFASST coarse level."""
        if self.coarsening is Coarsening.P:
            return self.elements, self.order - 1
        return self.elements // 2, self.order

    @property
    def formulation(self) -> Formulation:
        return self.method.formulation

    def describe(self) -> str:
        text = f"{self.method.value}, P{self.order}/{self.elements}"
        if self.method.is_pfasst:
            elements, order = self.coarse_discretization
            text += f" (coarse P{order}/{elements}, L={self.block})"
        return text


def steps_for(dt: float, horizon: float = HORIZON) -> int:
    """Number of steps of size dt covering the horizon; dt must divide it."""
    n_steps = int(round(horizon / dt))
    if n_steps < 1 or abs(n_steps * dt - horizon) > 1e-9 * horizon:
        raise ValueError(f"dt={dt} does not divide the time horizon {horizon} into whole steps")
    return n_steps


def parse_config_text(text: str) -> Dict[str, Any]:
    """
    Parse `key = value` lines into a dict for StudyConfig.

    Raises:
        ConfigurationError: malformed line or repeated key
    """
    data: Dict[str, Any] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {line_no}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if not key or not value:
            raise ConfigurationError(f"line {line_no}: empty key or value in {raw.strip()!r}")

        if key in _LIST_KEYS:
            parsed: Any = [item.strip() for item in value.split(",") if item.strip()]
        else:
            parsed = value

        target = data
        if "." in key:
            section, key = key.split(".", 1)
            target = data.setdefault(section, {})
            if not isinstance(target, dict):
                raise ConfigurationError(f"line {line_no}: {section!r} is not a section")
        if key in target:
            raise ConfigurationError(f"line {line_no}: repeated key {key!r}")
        target[key] = parsed
    return data


def load_config(path: Path, **overrides: Any) -> StudyConfig:
    """
    Read and validate a study file. Keyword overrides (e.g. from CLI flags)
    replace file values when not None.

    Raises:
        ConfigurationError: unreadable or malformed file
        pydantic.ValidationError: values fail validation
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"Cannot read config {path}: {exc}") from exc
    data = parse_config_text(text)
    data.update({key: value for key, value in overrides.items() if value is not None})
    logger.debug(f"Loaded config {path}: {data}")
    return StudyConfig.model_validate(data)
