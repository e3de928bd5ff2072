"""Run configuration: INI-style files mapping to model/pulse/integrator objects.

All frequencies and rates in a config are in units of the trap frequency nu,
all times in units of 1/nu.  Optional keys may be left empty to pick the
documented default (omega0_s -> omega0_p, tau_tilde -> 6T, delta_s ->
delta_p, sample_interval -> T/20).
"""
from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, fields, replace

from .analysis import mixed_lambda_state, thermal_state
from .basis import SystemSpec, build_basis
from .dynamics import DensityState, diagonal_state
from .integrate import IntegratorConfig
from .pulses import PulseParams, PulseSchedule, SCHEMES, make_schedule

HEADER = (
    "# rotcool run configuration.\n"
    "# Frequencies and rates are in units of the trap frequency nu;\n"
    "# times are in units of 1/nu.  Empty optional values take the\n"
    "# documented defaults.\n"
)

INITIAL_KINDS = ("thermal", "lambda_mixture", "explicit")


class ConfigError(ValueError):
    """Configuration problem, anchored to the offending section/option."""


@dataclass(frozen=True)
class RunConfig:
    # [pulses]
    scheme: str
    omega0_p: float
    T: float
    tau: float
    # [system]
    j_max: int
    n_max: int
    eta: float = 0.1
    gamma_j: float = 0.01
    gamma_u: float = 0.01
    beta_b: float = 0.15
    chain: tuple = ()
    # optional pulse knobs
    omega0_s: float | None = None
    tau_tilde: float | None = None
    delta_p: float = 0.0
    delta_s: float | None = None
    alpha: float = 0.0
    # [integrator]
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = 0.05
    sample_interval: float | None = None
    hermitize_every_step: bool = True
    # [initial]
    initial: str = "thermal"
    p_ground: float = 0.3
    p_excited: float = 0.7
    diagonal: tuple = ()
    # [run]
    cycles: int = 1
    out: str = ""

    def replace(self, **kw) -> "RunConfig":
        return replace(self, **kw)

    # -- building ----------------------------------------------------------

    def build(self):
        """Return (SystemSpec, PulseSchedule, IntegratorConfig, rho0, cycles)."""
        spec = SystemSpec(j_max=self.j_max, n_max=self.n_max, eta=self.eta,
                          gamma_j=self.gamma_j, gamma_u=self.gamma_u,
                          beta_b=self.beta_b, chain=self.chain)
        params = PulseParams(omega0_p=self.omega0_p, width=self.T, tau=self.tau,
                             omega0_s=self.omega0_s, tau_tilde=self.tau_tilde,
                             delta_p=self.delta_p, delta_s=self.delta_s,
                             alpha=self.alpha)
        schedule = make_schedule(self.scheme, spec, params)
        icfg = IntegratorConfig(rel_tol=self.rel_tol, abs_tol=self.abs_tol,
                                max_step=self.max_step,
                                sample_interval=self.sample_interval,
                                hermitize_every_step=self.hermitize_every_step)
        basis = build_basis(spec)
        if self.initial == "thermal":
            rho0 = thermal_state(basis, spec)
        elif self.initial == "lambda_mixture":
            rho0 = mixed_lambda_state(basis, self.p_ground, self.p_excited)
        elif self.initial == "explicit":
            entries = {}
            for label, n, pop in self.diagonal:
                key = label if label in ("e", "u") else int(label)
                entries[(key, int(n))] = float(pop)
            rho0 = diagonal_state(basis, entries)
        else:
            raise ConfigError(f"[initial] kind: unknown kind {self.initial!r}")
        if self.cycles < 1:
            raise ConfigError(f"[run] cycles: must be >= 1, got {self.cycles}")
        return spec, schedule, icfg, rho0, self.cycles

    # -- serialization -----------------------------------------------------

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
        try:
            with open(path) as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from exc
        return cls.from_parser(cp)

    @classmethod
    def from_parser(cls, cp: configparser.ConfigParser) -> "RunConfig":
        def get(sec, opt, default=None):
            val = cp.get(sec, opt, fallback=None)
            if val is None or val.strip() == "":
                return default
            return val.strip()

        def getfloat(sec, opt, default=None):
            raw = get(sec, opt)
            if raw is None:
                if default is None:
                    raise ConfigError(f"[{sec}] {opt}: required value is missing")
                return default
            try:
                return float(raw)
            except ValueError:
                raise ConfigError(f"[{sec}] {opt}: not a number: {raw!r}") from None

        def getint(sec, opt, default=None):
            raw = get(sec, opt)
            if raw is None:
                if default is None:
                    raise ConfigError(f"[{sec}] {opt}: required value is missing")
                return default
            try:
                return int(raw)
            except ValueError:
                raise ConfigError(f"[{sec}] {opt}: not an integer: {raw!r}") from None

        def getopt_float(sec, opt):
            raw = get(sec, opt)
            if raw is None:
                return None
            try:
                return float(raw)
            except ValueError:
                raise ConfigError(f"[{sec}] {opt}: not a number: {raw!r}") from None

        def getbool(sec, opt, default):
            raw = get(sec, opt)
            if raw is None:
                return default
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ConfigError(f"[{sec}] {opt}: not a boolean: {raw!r}")

        scheme = get("pulses", "scheme")
        if scheme is None:
            raise ConfigError("[pulses] scheme: required value is missing")
        if scheme not in SCHEMES:
            raise ConfigError(f"[pulses] scheme: unknown scheme {scheme!r}")

        chain = ()
        raw_chain = get("system", "chain")
        if raw_chain:
            try:
                chain = tuple(tuple(int(x) for x in pair.split(">"))
                              for pair in raw_chain.split(","))
                if any(len(p) != 2 for p in chain):
                    raise ValueError
            except ValueError:
                raise ConfigError(
                    f"[system] chain: expected comma-separated upper>lower pairs, got {raw_chain!r}"
                ) from None

        diagonal = ()
        raw_diag = get("initial", "diagonal")
        if raw_diag:
            try:
                entries = []
                for item in raw_diag.split(","):
                    label, n, pop = item.split(":")
                    label = label.strip()
                    if label not in ("e", "u"):
                        int(label)
                    entries.append((label, int(n), float(pop)))
                diagonal = tuple(entries)
            except ValueError:
                raise ConfigError(
                    f"[initial] diagonal: expected label:n:population triples, got {raw_diag!r}"
                ) from None

        initial = get("initial", "kind", "thermal")
        if initial not in INITIAL_KINDS:
            raise ConfigError(f"[initial] kind: unknown kind {initial!r}")

        return cls(
            scheme=scheme,
            omega0_p=getfloat("pulses", "omega0_p"),
            T=getfloat("pulses", "T"),
            tau=getfloat("pulses", "tau"),
            j_max=getint("system", "j_max"),
            n_max=getint("system", "n_max"),
            eta=getfloat("system", "eta", 0.1),
            gamma_j=getfloat("system", "gamma_j", 0.01),
            gamma_u=getfloat("system", "gamma_u", 0.01),
            beta_b=getfloat("system", "beta_b", 0.15),
            chain=chain,
            omega0_s=getopt_float("pulses", "omega0_s"),
            tau_tilde=getopt_float("pulses", "tau_tilde"),
            delta_p=getfloat("pulses", "delta_p", 0.0),
            delta_s=getopt_float("pulses", "delta_s"),
            alpha=getfloat("pulses", "alpha", 0.0),
            rel_tol=getfloat("integrator", "rel_tol", 1e-8),
            abs_tol=getfloat("integrator", "abs_tol", 1e-10),
            max_step=getfloat("integrator", "max_step", 0.05),
            sample_interval=getopt_float("integrator", "sample_interval"),
            hermitize_every_step=getbool("integrator", "hermitize_every_step", True),
            initial=initial,
            p_ground=getfloat("initial", "p_ground", 0.3),
            p_excited=getfloat("initial", "p_excited", 0.7),
            diagonal=diagonal,
            cycles=getint("run", "cycles", 1),
            out=get("run", "out", "") or "",
        )

    def dumps(self) -> str:
        def opt(v):
            return "" if v is None else repr(v)

        chain = ",".join(f"{u}>{l}" for u, l in self.chain)
        diag = ",".join(f"{lab}:{n}:{p!r}" for lab, n, p in self.diagonal)
        buf = io.StringIO()
        buf.write(HEADER)
        buf.write("\n[system]\n")
        buf.write(f"j_max = {self.j_max}\n")
        buf.write(f"n_max = {self.n_max}\n")
        buf.write(f"eta = {self.eta!r}\n")
        buf.write(f"gamma_j = {self.gamma_j!r}\n")
        buf.write(f"gamma_u = {self.gamma_u!r}\n")
        buf.write(f"beta_b = {self.beta_b!r}\n")
        buf.write(f"chain = {chain}\n")
        buf.write("\n[pulses]\n")
        buf.write(f"scheme = {self.scheme}\n")
        buf.write(f"omega0_p = {self.omega0_p!r}\n")
        buf.write(f"omega0_s = {opt(self.omega0_s)}\n")
        buf.write(f"T = {self.T!r}\n")
        buf.write(f"tau = {self.tau!r}\n")
        buf.write(f"tau_tilde = {opt(self.tau_tilde)}\n")
        buf.write(f"delta_p = {self.delta_p!r}\n")
        buf.write(f"delta_s = {opt(self.delta_s)}\n")
        buf.write(f"alpha = {self.alpha!r}\n")
        buf.write("\n[initial]\n")
        buf.write(f"kind = {self.initial}\n")
        buf.write(f"p_ground = {self.p_ground!r}\n")
        buf.write(f"p_excited = {self.p_excited!r}\n")
        buf.write(f"diagonal = {diag}\n")
        buf.write("\n[integrator]\n")
        buf.write(f"rel_tol = {self.rel_tol!r}\n")
        buf.write(f"abs_tol = {self.abs_tol!r}\n")
        buf.write(f"max_step = {self.max_step!r}\n")
        buf.write(f"sample_interval = {opt(self.sample_interval)}\n")
        buf.write(f"hermitize_every_step = {str(self.hermitize_every_step).lower()}\n")
        buf.write("\n[run]\n")
        buf.write(f"cycles = {self.cycles}\n")
        buf.write(f"out = {self.out}\n")
        return buf.getvalue()

    def scalar_field_names(self) -> tuple:
        return tuple(f.name for f in fields(self)
                     if f.name not in ("scheme", "chain", "diagonal", "initial", "out"))
