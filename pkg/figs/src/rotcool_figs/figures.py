"""Rendering of rotcool output files into static images.

Consumes only the documented CSV schemas:
  sweep CSV       header ``axis1,axis2,efficiency,loss,flag``
  trajectory CSV  header ``time,label,n,population``

Four figure kinds: ``heatmap`` (2-axis sweep efficiency map), ``curve``
(efficiency vs. axis1, one line per input file), ``bars`` (population
distribution over (label, n) at the first or last sampled time) and ``loss``
(uncoupled-level population vs. time).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

KINDS = ("heatmap", "curve", "bars", "loss")

SWEEP_COLUMNS = {"axis1", "axis2", "efficiency", "loss", "flag"}
TRAJECTORY_COLUMNS = {"time", "label", "n", "population"}


class FigureError(ValueError):
    """Raised for unusable inputs (missing file, column, or empty data)."""


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple            # one or more CSV paths
    kind: str                # heatmap | curve | bars | loss
    output: str              # image path
    labels: tuple = ()       # per-input legend labels (curve)
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    which: str = "last"      # bars: "first" or "last" sampled time
    value: str = "efficiency"  # curve/heatmap: "efficiency" or "loss"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise FigureError("no input files given")
        if self.which not in ("first", "last"):
            raise FigureError(f"bars selector must be first/last, got {self.which!r}")
        if self.value not in ("efficiency", "loss"):
            raise FigureError(f"value column must be efficiency/loss, got {self.value!r}")


def read_csv(path, required: set) -> list[dict]:
    """Rows of a rotcool CSV, checked against the documented schema."""
    p = Path(path)
    if not p.exists():
        raise FigureError(f"input file not found: {path}")
    with open(p, newline="") as fh:
        reader = csv.DictReader(fh)
        header = set(reader.fieldnames or ())
        missing = required - header
        if missing:
            raise FigureError(
                f"{path}: missing column(s) {', '.join(sorted(missing))}")
        rows = list(reader)
    if not rows:
        raise FigureError(f"{path}: no data rows")
    return rows


def _sweep_points(path, value):
    rows = read_csv(path, SWEEP_COLUMNS)
    pts = []
    for row in rows:
        if row["flag"].startswith("error"):
            continue
        val = row[value] if value != "loss" else row["loss"]
        if val == "":
            continue
        a2 = float(row["axis2"]) if row["axis2"] != "" else None
        pts.append((float(row["axis1"]), a2, float(val)))
    if not pts:
        raise FigureError(f"{path}: no usable data rows")
    return pts


def _trajectory(path):
    rows = read_csv(path, TRAJECTORY_COLUMNS)
    out = []
    for row in rows:
        out.append((float(row["time"]), row["label"], int(row["n"]),
                    float(row["population"])))
    return out


def render_heatmap(spec: FigureSpec, ax) -> None:
    pts = _sweep_points(spec.inputs[0], spec.value)
    if any(p[1] is None for p in pts):
        raise FigureError(f"{spec.inputs[0]}: heatmap needs a second axis "
                          f"(axis2 column has empty values)")
    xs = sorted({p[0] for p in pts})
    ys = sorted({p[1] for p in pts})
    grid = np.full((len(ys), len(xs)), np.nan)
    for a1, a2, v in pts:
        grid[ys.index(a2), xs.index(a1)] = v
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest", vmin=0.0, vmax=1.0)
    ax.figure.colorbar(mesh, ax=ax, label=spec.value)


def render_curve(spec: FigureSpec, ax) -> None:
    labels = spec.labels or tuple(Path(p).stem for p in spec.inputs)
    if len(labels) != len(spec.inputs):
        raise FigureError("need one label per input file")
    for path, label in zip(spec.inputs, labels):
        pts = _sweep_points(path, spec.value)
        pts.sort(key=lambda p: p[0])
        ax.plot([p[0] for p in pts], [p[2] for p in pts], marker="o", label=label)
    ax.set_ylim(0.0, 1.05)
    ax.legend()


def bars_distribution(path, which="last"):
    """Population per (label, n) at the first or last sampled time."""
    rows = _trajectory(path)
    times = [r[0] for r in rows]
    t_sel = min(times) if which == "first" else max(times)
    dist = {}
    for t, label, n, pop in rows:
        if t == t_sel:
            dist[(label, n)] = dist.get((label, n), 0.0) + pop
    total = sum(dist.values())
    if not 0.999999 <= total <= 1.000001:
        raise FigureError(f"{path}: populations at t = {t_sel} sum to {total!r}")
    return t_sel, dist


def render_bars(spec: FigureSpec, ax) -> None:
    t_sel, dist = bars_distribution(spec.inputs[0], spec.which)
    labels = sorted({k[0] for k in dist}, key=lambda s: (len(s), s))
    n_max = max(k[1] for k in dist)
    width = 0.9 / len(labels)
    for i, label in enumerate(labels):
        ns = np.arange(n_max + 1)
        heights = [dist.get((label, n), 0.0) for n in ns]
        ax.bar(ns + (i - len(labels) / 2) * width, heights, width=width,
               label=f"level {label}")
    ax.set_xticks(range(n_max + 1))
    ax.legend(ncol=2, fontsize="small")
    ax.set_title(spec.title or f"population distribution at t = {t_sel:g}")


def loss_trace(path):
    """Total uncoupled-level population per sampled time."""
    rows = _trajectory(path)
    acc = {}
    for t, label, n, pop in rows:
        if label == "u":
            acc[t] = acc.get(t, 0.0) + pop
    times = sorted({r[0] for r in rows})
    return times, [acc.get(t, 0.0) for t in times]


def render_loss(spec: FigureSpec, ax) -> None:
    times, losses = loss_trace(spec.inputs[0])
    ax.plot(times, losses)
    ax.set_xlabel(spec.xlabel or "time (1/nu)")
    ax.set_ylabel(spec.ylabel or "uncoupled population")


_RENDERERS = {
    "heatmap": render_heatmap,
    "curve": render_curve,
    "bars": render_bars,
    "loss": render_loss,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written image path."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    try:
        _RENDERERS[spec.kind](spec, ax)
        if spec.xlabel:
            ax.set_xlabel(spec.xlabel)
        if spec.ylabel:
            ax.set_ylabel(spec.ylabel)
        if spec.title:
            ax.set_title(spec.title)
        fig.tight_layout()
        out = Path(spec.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, dpi=150)
        return out
    finally:
        plt.close(fig)
