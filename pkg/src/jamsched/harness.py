"""Seeded parameter sweeps, their configuration files and CSV output.

A spec fixes a geometry, a network configuration and a jammer population,
then varies one parameter (optionally crossed with a second "family"
parameter) over a list of values, deploying ``seeds`` random networks per
point. Everything is a pure function of the sweep settings, so repeated runs emit
identical CSV bytes.
"""

from __future__ import annotations

import configparser
import io
import math
import time
from dataclasses import asdict, dataclass, field, fields, replace
from typing import IO, Iterable, Sequence

from jamsched.errors import ConfigError, JamschedError
from jamsched.geometry import Rect
from jamsched.greedy import greedy_schedule
from jamsched.lifetime import baseline_lifetime, infinite_lifetime_certificate
from jamsched.mrs import mrs_schedule
from jamsched.sinr import NetworkConfig, active_count_bounds, constraint_field
from jamsched.world import WorldModel, deploy_jammers, make_world

ALGORITHMS = ("greedy", "mrs", "baseline")

# name -> (aliases, integral, stated range)
SWEEP_VARIABLES = {
    "n": ((), True, (30, 120)),
    "p_j": (("P_J", "pj"), False, (0.1, 20.0)),
    "lifespan": (("B",), True, (1, 10)),
    "delta2": ((), False, (0.1, 0.9)),
    "eta": ((), False, (0.0, 0.8)),
    "c": ((), True, (4, 20)),
}

PROFILES = {
    "large": dict(
        fence_width=100.0, fence_height=100.0, storage_width=25.0, storage_height=25.0,
        n=100, p_t=10.0, delta1=2.0,
    ),
    "desk": dict(
        fence_width=40.0, fence_height=40.0, storage_width=10.0, storage_height=10.0,
        n=20, p_t=1.0, delta1=0.2,
    ),
}


class InfeasibleDefaultError(ConfigError):
    """The full jammer set is unreliable at the sweep's base parameters."""


def canonical_variable(name: str) -> str:
    for key, (aliases, _, _) in SWEEP_VARIABLES.items():
        if name == key or name in aliases:
            return key
    raise ConfigError(f"unknown sweep variable {name!r}; expected one of {sorted(SWEEP_VARIABLES)}")


@dataclass(frozen=True)
class ExperimentSpec:
    # geometry
    profile: str = "desk"
    fence_width: float | None = None
    fence_height: float | None = None
    storage_width: float | None = None
    storage_height: float | None = None
    step: float = 2.0
    epsilon: float = 0.5
    # network
    p_t: float | None = None
    p_j: float = 1.0
    gamma: float = 2.0
    delta1: float | None = None
    delta2: float = 0.5
    c: int = 10
    # jammers
    n: int | None = None
    lifespan: int = 10
    eta: float = 0.0
    # sweep
    variable: str | None = None
    values: tuple[float, ...] = ()
    family_variable: str | None = None
    family_values: tuple[float, ...] = ()
    seeds: int = 5
    base_seed: int = 0
    algorithm: str = "greedy"
    max_slots: int = 100_000
    analyze: bool = True
    validate: bool = True
    extended_range: bool = False

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ConfigError(f"unknown profile {self.profile!r}")
        for key, val in PROFILES[self.profile].items():
            if getattr(self, key) is None:
                object.__setattr__(self, key, val)
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}")
        if self.seeds < 1:
            raise ConfigError("seeds must be >= 1")
        if self.max_slots < 1:
            raise ConfigError("max_slots must be >= 1")
        for var_attr, vals_attr in (("variable", "values"), ("family_variable", "family_values")):
            var = getattr(self, var_attr)
            if var is None:
                if getattr(self, vals_attr):
                    raise ConfigError(f"{vals_attr} given without {var_attr}")
                continue
            var = canonical_variable(var)
            object.__setattr__(self, var_attr, var)
            vals = tuple(float(v) for v in getattr(self, vals_attr))
            if not vals:
                raise ConfigError(f"{var_attr} {var!r} needs at least one value")
            _, integral, (lo, hi) = SWEEP_VARIABLES[var]
            if integral and any(v != int(v) for v in vals):
                raise ConfigError(f"{var} takes integer values")
            if not self.extended_range and any(v < lo or v > hi for v in vals):
                raise ConfigError(
                    f"{var} values outside the stated range [{lo}, {hi}]; "
                    "set extended_range = true to allow this"
                )
            object.__setattr__(self, vals_attr, vals)
        if self.variable is not None and self.variable == self.family_variable:
            raise ConfigError("sweep and family variables must differ")
        self.point(None, None)  # validate the base point

    def point(self, value, family) -> "Point":
        """Parameters at one sweep point (``None`` keeps the base value)."""
        params = {
            "n": self.n, "p_j": self.p_j, "lifespan": self.lifespan,
            "delta2": self.delta2, "eta": self.eta, "c": self.c,
        }
        if value is not None:
            params[self.variable] = value
        if family is not None:
            params[self.family_variable] = family
        for key in ("n", "lifespan", "c"):
            params[key] = int(params[key])
        try:
            cfg = NetworkConfig(
                p_t=self.p_t, p_j=params["p_j"], gamma=self.gamma, delta1=self.delta1,
                delta2=params["delta2"], c=params["c"], step=self.step, epsilon=self.epsilon,
            )
        except JamschedError as exc:
            raise ConfigError(str(exc)) from None
        if params["n"] < 1 or params["lifespan"] < 1 or not 0 <= params["eta"] <= 1:
            raise ConfigError("need n >= 1, lifespan >= 1 and 0 <= eta <= 1")
        return Point(cfg, params["n"], params["lifespan"], params["eta"])

    def geometry(self) -> WorldModel:
        fence = Rect(0.0, 0.0, self.fence_width, self.fence_height)
        storage = Rect.centered(fence, self.storage_width, self.storage_height)
        return make_world(fence, storage, self.step, self.epsilon)

    def seed_list(self) -> list[int]:
        return [self.base_seed + i for i in range(self.seeds)]


@dataclass(frozen=True)
class Point:
    cfg: NetworkConfig
    n: int
    lifespan: int
    eta: float

    @property
    def rechargeable(self) -> int:
        # round half up, so eta * n = 2.5 gives 3
        return int(math.floor(self.eta * self.n + 0.5))

    def deploy(self, geometry: WorldModel, seed: int) -> WorldModel:
        units = self.lifespan * self.cfg.c
        return deploy_jammers(
            geometry, self.n, seed, capacity=units, rechargeable=self.rechargeable
        )


@dataclass(frozen=True)
class ExperimentRecord:
    sweep_value: float | None
    family_value: float | None
    seed: int
    algorithm: str
    lifetime: int
    baseline: int
    wall_time: float
    verdict: str | None
    l_jam: int | None
    lower: int
    upper: int
    termination: str
    feasible: bool


def validate_defaults(spec: ExperimentSpec) -> None:
    """Every seed's network at the base parameters must be reliable as a whole."""
    point = spec.point(None, None)
    geometry = spec.geometry()
    bad = []
    for seed in spec.seed_list():
        world = point.deploy(geometry, seed)
        if not constraint_field(world, point.cfg).reliable(world.ids):
            bad.append(seed)
    if bad:
        raise InfeasibleDefaultError(
            f"the full jammer set is unreliable at the base parameters for seeds {bad}"
        )


def run_point(spec: ExperimentSpec, value, family, seed: int) -> ExperimentRecord:
    point = spec.point(value, family)
    cfg = point.cfg
    world = point.deploy(spec.geometry(), seed)
    t0 = time.perf_counter()
    feasible = constraint_field(world, cfg).reliable(world.ids)
    lower, upper = active_count_bounds(world, cfg)
    baseline = baseline_lifetime(world, cfg, spec.max_slots)
    if spec.algorithm == "greedy":
        sched = greedy_schedule(world, cfg, spec.max_slots)
        lifetime, termination = sched.lifetime, sched.termination.value
    elif spec.algorithm == "mrs":
        sched = mrs_schedule(world, cfg)
        lifetime, termination = sched.lifetime, sched.termination.value
    else:
        lifetime = baseline
        termination = "SlotCapReached" if baseline >= spec.max_slots else "Dead"
    verdict = l_jam = None
    if spec.analyze:
        cert = infinite_lifetime_certificate(world, cfg)
        verdict, l_jam = cert.verdict.value, cert.l_jam
    return ExperimentRecord(
        value, family, seed, spec.algorithm, lifetime, baseline,
        time.perf_counter() - t0, verdict, l_jam, lower, upper, termination, feasible,
    )


def run_experiment(spec: ExperimentSpec) -> list[ExperimentRecord]:
    if spec.validate:
        validate_defaults(spec)
    values = spec.values if spec.variable else (None,)
    families = spec.family_values if spec.family_variable else (None,)
    records = [
        run_point(spec, value, family, seed)
        for value in values
        for family in families
        for seed in spec.seed_list()
    ]
    return sort_records(records)


def sort_records(records: Iterable[ExperimentRecord]) -> list[ExperimentRecord]:
    def key(r):
        return (
            -math.inf if r.sweep_value is None else r.sweep_value,
            -math.inf if r.family_value is None else r.family_value,
            r.seed,
            r.algorithm,
        )

    return sorted(records, key=key)


COLUMNS = tuple(f.name for f in fields(ExperimentRecord))


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if v == int(v) and abs(v) < 1e15:
            return str(int(v))
        return format(v, ".9g")
    return str(v)


def emit_csv(records: Sequence[ExperimentRecord], sink: IO[str], timing: bool = False) -> None:
    """Header plus one line per record; ``wall_time`` only with ``timing``.

    Wall time is the one field that is not a function of the sweep settings, so it is
    left out unless asked for.
    """
    cols = [c for c in COLUMNS if timing or c != "wall_time"]
    sink.write(",".join(cols) + "\n")
    for r in records:
        row = asdict(r)
        sink.write(",".join(_cell(row[c]) for c in cols) + "\n")


def csv_text(records: Sequence[ExperimentRecord], timing: bool = False) -> str:
    buf = io.StringIO()
    emit_csv(records, buf, timing)
    return buf.getvalue()


# ---- configuration files -------------------------------------------------

SECTIONS = {
    "geometry": (
        "profile", "fence_width", "fence_height", "storage_width", "storage_height",
        "step", "epsilon",
    ),
    "network": ("p_t", "p_j", "gamma", "delta1", "delta2", "c"),
    "jammers": ("n", "lifespan", "eta"),
    "sweep": (
        "variable", "values", "family_variable", "family_values", "seeds", "base_seed",
        "algorithm", "max_slots", "analyze", "validate", "extended_range",
    ),
}
_INTS = {"c", "n", "lifespan", "seeds", "base_seed", "max_slots"}
_BOOLS = {"analyze", "validate", "extended_range"}
_STRS = {"profile", "variable", "family_variable", "algorithm"}
_LISTS = {"values", "family_values"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in _STRS:
        return raw or None
    if key in _LISTS:
        return tuple(float(v) for v in raw.replace(",", " ").split())
    if key in _BOOLS:
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if key in _INTS:
        return int(raw)
    return float(raw)


def parse_config(text: str) -> ExperimentSpec:
    """Build a spec from INI text with sections geometry/network/jammers/sweep.

    Missing keys take the profile defaults; unknown sections or keys are errors.
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="\0none")
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    kwargs = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                kwargs[key] = _parse_value(key, raw)
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from None
    return ExperimentSpec(**kwargs)


def load_config(path) -> ExperimentSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


def format_config(spec: ExperimentSpec) -> str:
    """INI text with every key spelled out; ``parse_config`` reads it back to ``spec``."""
    data = asdict(spec)
    out = []
    for section, keys in SECTIONS.items():
        out.append(f"[{section}]")
        for key in keys:
            v = data[key]
            if v is None:
                text = ""
            elif isinstance(v, bool):
                text = "true" if v else "false"
            elif isinstance(v, tuple):
                text = ", ".join(repr(float(x)) for x in v)
            elif isinstance(v, float):
                text = repr(v)
            else:
                text = str(v)
            out.append(f"{key} = {text}")
        out.append("")
    return "\n".join(out)
