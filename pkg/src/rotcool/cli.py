"""Command-line interface: simulate, sweep, oracle and estimate commands.

Exit codes: 0 success, 2 configuration/validation failure, 3 integration
abort (or sweep with error rows).  Output files are written atomically, so
a failed run never leaves a partial summary behind.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .analysis import (chain_estimate, lz_exponent, lz_prediction,
                       populated_levels, scrap_margin, thermal_state)
from .basis import SystemSpec, build_basis
from .config import ConfigError, RunConfig
from .integrate import IntegrationError, run_cycles
from .sweep import SweepPlan, run_sweep

POPULATION_FLOOR = 1e-12   # trajectory rows below this are not written


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)


def _trajectory_csv(basis, times, populations) -> str:
    lines = ["time,label,n,population"]
    for t, pops in zip(times, populations):
        for i, p in enumerate(pops):
            if p > POPULATION_FLOOR:
                label, n = basis.label(i)
                lines.append(f"{float(t)!r},{label},{n},{float(p)!r}")
    return "\n".join(lines) + "\n"


def _summary_json(result, cycles) -> str:
    return json.dumps({
        "efficiency": result.efficiency,
        "loss_u": result.loss_u,
        "cycles": cycles,
        "per_cycle": list(result.per_cycle),
        "truncation_warning": bool(result.truncation_flag),
        "steps": int(result.step_count),
        "wall_time_s": result.wall_time,
    }, indent=2) + "\n"


def cmd_simulate(args) -> int:
    try:
        cfg = RunConfig.from_file(args.config)
        if args.dump_config:
            _write_atomic(Path(args.dump_config), cfg.dumps())
            return 0
        out = args.out or cfg.out
        if not out:
            print("simulate: no output directory (--out or [run] out)", file=sys.stderr)
            return 2
        spec, schedule, icfg, rho0, cycles = cfg.build()
    except (ConfigError, ValueError) as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return 2
    try:
        result = run_cycles(spec, schedule, rho0, icfg, cycles)
    except IntegrationError as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return 3
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    basis = build_basis(spec)
    _write_atomic(out_dir / "trajectory.csv",
                  _trajectory_csv(basis, result.times, result.populations))
    _write_atomic(out_dir / "summary.json", _summary_json(result, cycles))
    return 0


def _parse_axis(cp, base, which):
    path = cp.get("sweep", which, fallback="").strip()
    if not path:
        return None
    raw = cp.get("sweep", which + "_values", fallback="").strip()
    if not raw:
        raise ConfigError(f"[sweep] {which}_values: required for axis {path}")
    if raw.startswith("linspace(") and raw.endswith(")"):
        a, b, n = (x.strip() for x in raw[len("linspace("):-1].split(","))
        values = tuple(float(v) for v in np.linspace(float(a), float(b), int(n)))
    else:
        values = tuple(float(v) for v in raw.split(","))
    return (path, values)


def load_plan(path) -> SweepPlan:
    import configparser

    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read plan {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    if not cp.has_section("sweep"):
        raise ConfigError("[sweep]: section is missing")
    base = RunConfig.from_parser(cp)
    axis1 = _parse_axis(cp, base, "axis1")
    if axis1 is None:
        raise ConfigError("[sweep] axis1: required value is missing")
    axis2 = _parse_axis(cp, base, "axis2")
    return SweepPlan(base=base, axis1=axis1, axis2=axis2)


def _sweep_csv(rows) -> str:
    lines = ["axis1,axis2,efficiency,loss,flag"]
    for r in rows:
        a2 = "" if r.axis2 is None else repr(r.axis2)
        eff = "" if r.efficiency != r.efficiency else repr(r.efficiency)  # NaN -> empty
        loss = "" if r.loss_u != r.loss_u else repr(r.loss_u)
        lines.append(f"{r.axis1!r},{a2},{eff},{loss},{r.flag}")
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    try:
        plan = load_plan(args.plan)
    except (ConfigError, ValueError) as exc:
        print(f"sweep: {exc}", file=sys.stderr)
        return 2
    rows = run_sweep(plan, workers=args.workers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_atomic(out_dir / "sweep.csv", _sweep_csv(rows))
    failed = [r for r in rows if r.flag.startswith("error")]
    if failed:
        print(f"sweep: {len(failed)} of {len(rows)} points failed", file=sys.stderr)
        return 3
    return 0


def cmd_oracle(args) -> int:
    try:
        out = {
            "lz_lambda": lz_exponent(args.eta, args.omega0, args.delta_p, args.alpha),
            "lz_transfer": lz_prediction(args.eta, args.omega0, args.delta_p,
                                         args.alpha, args.p_init),
        }
        if args.width is not None and args.tau is not None:
            out["scrap_margin"] = scrap_margin(args.omega0, args.width, args.tau,
                                               args.delta_p)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"oracle: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(out, indent=2))
    return 0


def cmd_estimate(args) -> int:
    out = {}
    try:
        if args.epsilon_step is not None:
            if args.populations:
                pops = [float(x) for x in args.populations.split(",")]
            else:
                spec = SystemSpec(j_max=args.j_max, n_max=1, beta_b=args.beta_b)
                state = thermal_state(build_basis(spec), spec)
                pops = [float(state.populations()[state.basis.index(j, 0)])
                        for j in range(args.j_max + 1)]
            out["chain_total"] = chain_estimate(args.epsilon_step, pops)
        if args.kt_over_b is not None:
            if args.p_cut is None:
                raise ValueError("--p-cut is required with --kt-over-b")
            out["populated_levels"] = populated_levels(args.kt_over_b, args.p_cut)
        if not out:
            raise ValueError("nothing to estimate: pass --epsilon-step or --kt-over-b")
    except (ValueError, ConfigError) as exc:
        print(f"estimate: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(out, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rotcool",
        description="Rotational-state cooling of a trapped molecular ion by "
                    "adiabatic passage: simulate, sweep and estimate.")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one configuration")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", default="")
    sim.add_argument("--dump-config", default="",
                     help="write the normalized configuration and exit")
    sim.set_defaults(func=cmd_simulate)

    sw = sub.add_parser("sweep", help="run a 1- or 2-axis parameter grid")
    sw.add_argument("--plan", required=True)
    sw.add_argument("--out", required=True)
    sw.add_argument("--workers", type=int, default=None,
                    help=f"grid workers (default: ${'{'}ROTCOOL_WORKERS{'}'} or cpu count)")
    sw.set_defaults(func=cmd_sweep)

    orc = sub.add_parser("oracle", help="closed-form transfer estimates")
    orc.add_argument("--eta", type=float, required=True)
    orc.add_argument("--omega0", type=float, required=True)
    orc.add_argument("--delta-p", type=float, required=True)
    orc.add_argument("--alpha", type=float, required=True)
    orc.add_argument("--p-init", type=float, default=1.0)
    orc.add_argument("--width", type=float, default=None)
    orc.add_argument("--tau", type=float, default=None)
    orc.set_defaults(func=cmd_oracle)

    est = sub.add_parser("estimate", help="chain and level-count estimates")
    est.add_argument("--epsilon-step", type=float, default=None)
    est.add_argument("--populations", default="",
                     help="comma-separated initial populations per J")
    est.add_argument("--beta-b", type=float, default=0.15)
    est.add_argument("--j-max", type=int, default=5)
    est.add_argument("--kt-over-b", type=float, default=None)
    est.add_argument("--p-cut", type=float, default=None)
    est.set_defaults(func=cmd_estimate)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
