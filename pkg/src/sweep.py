"""
(θ, p) Parameter Sweep
Evaluates the closed-form strategy, the SRM comparator and the certificate on a grid
"""

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.errors import DomainError
from src.measurement.ensemble import P_MAX, THETA_MAX, degrees_to_radians, make_ensemble
from src.measurement.operators import check_helstrom
from src.measurement.strategy import optimal_povm, srm_success

logger = logging.getLogger("mirror_povm.sweep")

DEFAULT_COLUMNS: Tuple[str, ...] = (
    "theta",
    "p",
    "regime",
    "a",
    "p_success",
    "p_success_srm",
    "certificate_ok",
)
EXTRA_COLUMNS: Tuple[str, ...] = ("boundary_p", "srm_gap", "degenerate")
KNOWN_COLUMNS = DEFAULT_COLUMNS + EXTRA_COLUMNS


class SweepSpec(BaseModel):
    """Grid bounds (radians), grid counts and output column selection"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    theta_min: float = Field(0.0, ge=0.0, le=THETA_MAX)
    theta_max: float = Field(THETA_MAX, ge=0.0, le=THETA_MAX)
    p_min: float = Field(0.0, ge=0.0, le=P_MAX)
    p_max: float = Field(P_MAX, ge=0.0, le=P_MAX)
    n_theta: int = Field(50, ge=2)
    n_p: int = Field(50, ge=2)
    columns: Tuple[str, ...] = DEFAULT_COLUMNS

    @field_validator("columns", mode="before")
    @classmethod
    def split_columns(cls, value: Any) -> Any:
        if isinstance(value, str):
            return tuple(name.strip() for name in value.split(",") if name.strip())
        return value

    @field_validator("columns")
    @classmethod
    def check_columns(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        unknown = [name for name in value if name not in KNOWN_COLUMNS]
        if unknown:
            raise ValueError(f"Unknown columns {unknown}; choose from {list(KNOWN_COLUMNS)}")
        if not value:
            raise ValueError("At least one column is required")
        return value

    @model_validator(mode="after")
    def check_ranges(self) -> "SweepSpec":
        if self.theta_min > self.theta_max:
            raise ValueError(f"theta_min={self.theta_min} exceeds theta_max={self.theta_max}")
        if self.p_min > self.p_max:
            raise ValueError(f"p_min={self.p_min} exceeds p_max={self.p_max}")
        return self

    def thetas(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.n_theta)

    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.n_p)

    @property
    def n_points(self) -> int:
        return self.n_theta * self.n_p


def build_spec(
    file_values: Optional[Mapping[str, Optional[str]]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    degrees: bool = False,
) -> SweepSpec:
    """
    Merge config-file values with command-line overrides into a SweepSpec

    Args:
        file_values: Raw key=value pairs (e.g. from load_key_value_file)
        overrides: Values given on the command line; None entries are ignored
        degrees: theta_min/theta_max are given in degrees

    Returns:
        Validated SweepSpec

    Raises:
        pydantic.ValidationError: On out-of-domain ranges, counts below 2 or unknown keys
    """
    merged: Dict[str, Any] = {k: v for k, v in (file_values or {}).items() if v is not None}
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if degrees:
        for key in ("theta_min", "theta_max"):
            if key in merged:
                merged[key] = degrees_to_radians(float(merged[key]))
    return SweepSpec(**merged)


# ===== Rows =====

def evaluate_point(theta: float, p: float) -> Dict[str, Any]:
    """Every known column for one grid point, as raw Python values"""
    e = make_ensemble(theta, p)
    result = optimal_povm(e)
    srm = srm_success(e)
    certificate = check_helstrom(e, result.povm)
    return {
        "theta": e.theta,
        "p": e.p,
        "regime": result.regime.tag.value,
        "a": result.a,
        "p_success": result.success,
        "p_success_srm": srm,
        "certificate_ok": certificate.passed,
        "boundary_p": result.regime.boundary_p,
        "srm_gap": result.success - srm,
        "degenerate": result.degenerate,
    }


def _theta_block(args: Tuple[float, Sequence[float]]) -> List[Dict[str, Any]]:
    theta, ps = args
    return [evaluate_point(theta, p) for p in ps]


def run_sweep(spec: SweepSpec, workers: int = 1) -> List[Dict[str, Any]]:
    """
    Evaluate the grid in θ-major order

    Args:
        spec: Grid definition
        workers: Worker processes; rows come back in grid order regardless

    Returns:
        One dict per grid point with every known column
    """
    if workers < 1:
        raise DomainError("workers", workers, "workers >= 1")
    ps = [float(p) for p in spec.ps()]
    blocks = [(float(theta), ps) for theta in spec.thetas()]

    logger.info(f"Sweeping {spec.n_theta}x{spec.n_p} grid with {workers} worker(s)")
    if workers == 1:
        results = [_theta_block(block) for block in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_theta_block, blocks))

    rows = [row for block in results for row in block]
    failed = sum(1 for row in rows if not row["certificate_ok"])
    if failed:
        logger.warning(f"Certificate failed at {failed} of {len(rows)} grid points")
    logger.info(f"Sweep complete: {len(rows)} rows")
    return rows


# ===== Output =====

def format_value(value: Any) -> str:
    """12 significant digits for floats, lower-case booleans, empty for None"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.12g}"
    return str(value)


def _write_rows(f: TextIO, rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> None:
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[name]) for name in columns])


def format_csv(rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> str:
    """Header plus one line per row, as write_csv would produce"""
    buffer = io.StringIO()
    _write_rows(buffer, rows, columns)
    return buffer.getvalue()


def write_csv(rows: Iterable[Dict[str, Any]], columns: Sequence[str], path: Path) -> None:
    with open(Path(path), "w", newline="") as f:
        _write_rows(f, rows, columns)


def write_json(rows: Iterable[Dict[str, Any]], columns: Sequence[str], path: Path) -> None:
    path = Path(path)
    selected = [{name: row[name] for name in columns} for row in rows]
    with open(path, "w") as f:
        json.dump(selected, f, indent=2)
        f.write("\n")


def read_csv(path: Path) -> List[Dict[str, str]]:
    with open(Path(path), newline="") as f:
        return list(csv.DictReader(f))
