"""Interference sums, the reliability predicate and active-count bounds.

A jammer set is reliable when, with only its members active,

* every storage boundary point ``s`` sees ``sum ||j-s||^-gamma <= P_T / (P_J delta1)``
  (legitimate receivers are not disturbed), and
* every fence boundary point ``p`` sees
  ``sum ||j-p||^-gamma >= P_T d(p,S)^-gamma / (P_J delta2)`` (eavesdroppers are jammed).

Both families are evaluated only at the discretized boundary points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from collections import OrderedDict
from typing import Iterable, Optional

import numpy as np

from jamsched.errors import ParameterError
from jamsched.geometry import Point, distance_to_storage
from jamsched.world import WorldModel

TAU = 1e-9


def tolerance(rhs):
    """Absolute slack granted to a constraint with right-hand side ``rhs``."""
    return TAU * (1.0 + np.abs(rhs))


@dataclass(frozen=True)
class NetworkConfig:
    p_t: float = 10.0
    p_j: float = 1.0
    gamma: float = 2.0
    delta1: float = 2.0
    delta2: float = 0.5
    c: int = 10
    step: float = 2.0
    epsilon: float = 0.5

    def __post_init__(self):
        for name in ("p_t", "p_j", "gamma", "delta1", "delta2", "step", "epsilon"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be a positive finite number, got {v!r}")
        if not (isinstance(self.c, int) and self.c > 0):
            raise ParameterError(f"c must be a positive integer, got {self.c!r}")

    @property
    def storage_cap(self) -> float:
        """Right-hand side of the storage constraint (gain units)."""
        return self.p_t / (self.p_j * self.delta1)

    def fence_demand(self, d_ps: np.ndarray) -> np.ndarray:
        """Right-hand side of the fence constraint for storage distances ``d_ps``."""
        return self.p_t * np.power(d_ps, -self.gamma) / (self.p_j * self.delta2)


@dataclass(frozen=True)
class ReliabilityReport:
    reliable: bool
    worst_storage_margin: float
    worst_fence_margin: float
    violating_point: Optional[Point] = None


class ConstraintField:
    """Gain matrices of one jammer layout under one configuration.

    ``storage_gain[k, i]`` is ``||j_i - s_k||^-gamma``; ``fence_gain`` likewise
    for fence points. Columns follow ``world.jammers`` order.
    """

    def __init__(self, world: WorldModel, cfg: NetworkConfig):
        self.ids = world.ids
        self.column = {jid: k for k, jid in enumerate(self.ids)}
        self.storage_points = world.storage_boundary.points
        self.fence_points = world.fence_boundary.points
        pos = world.positions()
        s = world.storage_boundary.as_array()
        f = world.fence_boundary.as_array()
        self.storage_gain = _gain(s, pos, cfg.gamma)
        self.fence_gain = _gain(f, pos, cfg.gamma)
        self.storage_cap = cfg.storage_cap
        d_ps = np.array([distance_to_storage(p, world.storage) for p in self.fence_points])
        self.fence_demand = cfg.fence_demand(d_ps)
        self.storage_tol = float(tolerance(self.storage_cap))
        self.fence_tol = tolerance(self.fence_demand)
        for arr in (self.storage_gain, self.fence_gain):
            arr.setflags(write=False)
        self.fence_demand.setflags(write=False)

    def columns(self, active: Iterable[int]) -> list[int]:
        try:
            return sorted(self.column[jid] for jid in active)
        except KeyError as exc:
            raise KeyError(f"no jammer with id {exc.args[0]}") from None

    def sums(self, active: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
        cols = self.columns(active)
        return (
            self.storage_gain[:, cols].sum(axis=1),
            self.fence_gain[:, cols].sum(axis=1),
        )

    def report(self, active: Iterable[int]) -> ReliabilityReport:
        storage_lhs, fence_lhs = self.sums(active)
        storage_margin = self.storage_cap - storage_lhs
        fence_margin = fence_lhs - self.fence_demand
        bad_s = np.flatnonzero(storage_margin < -self.storage_tol)
        bad_f = np.flatnonzero(fence_margin < -self.fence_tol)
        violating = None
        if bad_s.size:
            violating = self.storage_points[bad_s[0]]
        elif bad_f.size:
            violating = self.fence_points[bad_f[0]]
        return ReliabilityReport(
            reliable=violating is None,
            worst_storage_margin=float(storage_margin.min()) if storage_margin.size else math.inf,
            worst_fence_margin=float(fence_margin.min()) if fence_margin.size else math.inf,
            violating_point=violating,
        )

    def reliable(self, active: Iterable[int]) -> bool:
        storage_lhs, fence_lhs = self.sums(active)
        return bool(
            np.all(storage_lhs <= self.storage_cap + self.storage_tol)
            and np.all(fence_lhs >= self.fence_demand - self.fence_tol)
        )

    def storage_ok(self, active: Iterable[int]) -> bool:
        storage_lhs, _ = self.sums(active)
        return bool(np.all(storage_lhs <= self.storage_cap + self.storage_tol))

    def fence_ok(self, active: Iterable[int]) -> bool:
        _, fence_lhs = self.sums(active)
        return bool(np.all(fence_lhs >= self.fence_demand - self.fence_tol))


def _gain(points: np.ndarray, jammers: np.ndarray, gamma: float) -> np.ndarray:
    if points.size == 0 or jammers.size == 0:
        return np.zeros((len(points), len(jammers)))
    d = np.hypot(
        points[:, None, 0] - jammers[None, :, 0], points[:, None, 1] - jammers[None, :, 1]
    )
    return np.power(d, -gamma)


_FIELD_CACHE: "OrderedDict[tuple, ConstraintField]" = OrderedDict()
_FIELD_CACHE_SIZE = 64


def constraint_field(world: WorldModel, cfg: NetworkConfig) -> ConstraintField:
    """Gain matrices for ``world``; cached on layout and the SINR parameters."""
    # c, step and epsilon do not enter the gains; normalise them out of the key
    key = (world.layout_key(), cfg.p_t, cfg.p_j, cfg.gamma, cfg.delta1, cfg.delta2)
    field = _FIELD_CACHE.get(key)
    if field is None:
        field = ConstraintField(world, cfg)
        _FIELD_CACHE[key] = field
        if len(_FIELD_CACHE) > _FIELD_CACHE_SIZE:
            _FIELD_CACHE.popitem(last=False)
    else:
        _FIELD_CACHE.move_to_end(key)
    return field


def interference_at(
    point: Point, active: Iterable[int], world: WorldModel, cfg: NetworkConfig
) -> float:
    """Received jamming power ``sum P_J ||j - point||^-gamma`` over ``active``."""
    total = 0.0
    for jid in sorted(set(active)):
        j = world.jammer(jid)
        total += cfg.p_j * math.hypot(j.position.x - point[0], j.position.y - point[1]) ** (
            -cfg.gamma
        )
    return total


def is_reliable(active: Iterable[int], world: WorldModel, cfg: NetworkConfig) -> ReliabilityReport:
    return constraint_field(world, cfg).report(active)


def active_count_bounds(world: WorldModel, cfg: NetworkConfig) -> tuple[int, int]:
    """Necessary cardinality range ``(lower, upper)`` for any reliable set.

    ``upper`` comes from the farthest jammer at each storage point, ``lower``
    from the nearest jammer at each fence point. ``lower > upper`` is returned
    as is.
    """
    if not world.jammers:
        raise ParameterError("active_count_bounds needs at least one deployed jammer")
    field = constraint_field(world, cfg)
    # gain is decreasing in distance: min gain <-> farthest, max gain <-> nearest
    min_gain_s = field.storage_gain.min(axis=1)
    upper_real = np.min((field.storage_cap + field.storage_tol) / min_gain_s)
    max_gain_f = field.fence_gain.max(axis=1)
    lower_real = np.max((field.fence_demand - field.fence_tol) / max_gain_f)
    upper = int(math.floor(upper_real)) if math.isfinite(upper_real) else len(world.jammers)
    lower = max(0, int(math.ceil(lower_real)))
    return lower, upper
