"""Grids of independent simulations over one or two parameter axes."""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config import ConfigError, RunConfig
from .integrate import IntegrationError, run_cycles

WORKERS_ENV = "ROTCOOL_WORKERS"


@dataclass(frozen=True)
class SweepPlan:
    """Base run configuration plus one or two value axes.

    Axis paths name scalar RunConfig fields, optionally with a section
    prefix (``pulses.omega0_p`` and ``omega0_p`` are equivalent).
    """

    base: RunConfig
    axis1: tuple        # (path, (values...))
    axis2: tuple | None = None

    def __post_init__(self):
        for axis in (self.axis1, self.axis2):
            if axis is None:
                continue
            path, values = axis
            resolve_path(self.base, path)
            if not values:
                raise ConfigError(f"sweep axis {path}: no values given")
            if any(not math.isfinite(v) for v in values):
                raise ConfigError(f"sweep axis {path}: values must be finite")

    def points(self) -> list:
        """Grid points in row-major order (axis1 outer, axis2 inner)."""
        p1, v1 = self.axis1
        if self.axis2 is None:
            return [((a, None), self.base.replace(**{resolve_path(self.base, p1): a}))
                    for a in v1]
        p2, v2 = self.axis2
        f1, f2 = resolve_path(self.base, p1), resolve_path(self.base, p2)
        return [((a, b), self.base.replace(**{f1: a, f2: b}))
                for a in v1 for b in v2]


@dataclass
class SweepRow:
    axis1: float
    axis2: float | None
    efficiency: float
    loss_u: float
    flag: str          # "ok", "trunc" or "error:<description>"
    wall_time: float


def resolve_path(base: RunConfig, path: str) -> str:
    """Map an axis path onto a scalar RunConfig field name."""
    name = path.split(".", 1)[1] if "." in path else path
    if name not in base.scalar_field_names():
        raise ConfigError(f"sweep axis {path!r} does not name a scalar parameter")
    return name


def _eval_point(task):
    (a, b), cfg = task
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            spec, schedule, icfg, rho0, cycles = cfg.build()
            result = run_cycles(spec, schedule, rho0, icfg, cycles)
        flag = "trunc" if result.truncation_flag else "ok"
        return SweepRow(a, b, result.efficiency, result.loss_u, flag, result.wall_time)
    except (IntegrationError, ValueError) as exc:
        return SweepRow(a, b, math.nan, math.nan, f"error:{exc}", 0.0)


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV, "")
    if env.strip():
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(plan: SweepPlan, workers: int | None = None) -> list:
    """Evaluate every grid point; rows come back in grid order.

    Points run independently (process pool for workers > 1); a failing run
    produces an error-flagged row instead of aborting the sweep.
    """
    tasks = plan.points()
    workers = workers if workers is not None else default_workers()
    if workers <= 1 or len(tasks) == 1:
        return [_eval_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(_eval_point, tasks))
