"""The storage/fence world with its deployed jammers."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from jamsched.energy import Jammer, Kind
from jamsched.errors import DeploymentError, ParameterError
from jamsched.geometry import (
    DiscretizedBoundary,
    Point,
    Rect,
    discretize_boundary,
    distance_to_storage,
)

DEFAULT_EPSILON = 0.5


@dataclass(frozen=True)
class WorldModel:
    storage: Rect
    fence: Rect
    storage_boundary: DiscretizedBoundary
    fence_boundary: DiscretizedBoundary
    jammers: tuple[Jammer, ...] = ()
    epsilon: float = DEFAULT_EPSILON
    _by_id: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.fence.strictly_contains(self.storage):
            raise ParameterError("storage must lie strictly inside the fence")
        if self.epsilon < 0:
            raise ParameterError("epsilon must be non-negative")
        by_id = {}
        for j in self.jammers:
            if j.id in by_id:
                raise ParameterError(f"duplicate jammer id {j.id}")
            if not placement_ok(j.position, self.storage, self.fence, self.epsilon):
                raise ParameterError(
                    f"jammer {j.id} at {tuple(j.position)} violates the "
                    f"{self.epsilon} m clearance from storage/fence"
                )
            by_id[j.id] = j
        object.__setattr__(self, "_by_id", by_id)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(j.id for j in self.jammers)

    def jammer(self, jid: int) -> Jammer:
        try:
            return self._by_id[jid]
        except KeyError:
            raise KeyError(f"no jammer with id {jid}") from None

    def positions(self) -> np.ndarray:
        return np.array([j.position for j in self.jammers], dtype=float).reshape(-1, 2)

    def with_jammers(self, jammers: Iterable[Jammer]) -> "WorldModel":
        return replace(self, jammers=tuple(jammers))

    def layout_key(self) -> tuple:
        """Everything the SINR constraints depend on (batteries excluded)."""
        return (
            self.storage,
            self.fence,
            self.storage_boundary.points,
            self.fence_boundary.points,
            tuple((j.id, j.position) for j in self.jammers),
        )


def placement_ok(p: Point, storage: Rect, fence: Rect, epsilon: float) -> bool:
    """Inside the fence, outside the storage, at least ``epsilon`` from both outlines."""
    if not (
        fence.min_x + epsilon <= p[0] <= fence.max_x - epsilon
        and fence.min_y + epsilon <= p[1] <= fence.max_y - epsilon
    ):
        return False
    if storage.contains(Point(*p)):
        return False
    return distance_to_storage(Point(*p), storage) >= epsilon


def make_world(
    fence: Rect, storage: Rect, step: float, epsilon: float = DEFAULT_EPSILON
) -> WorldModel:
    return WorldModel(
        storage=storage,
        fence=fence,
        storage_boundary=discretize_boundary(storage, step),
        fence_boundary=discretize_boundary(fence, step),
        epsilon=epsilon,
    )


def large_world(step: float = 2.0, epsilon: float = DEFAULT_EPSILON) -> WorldModel:
    """100 m fence with a centred 25 m storage."""
    fence = Rect(0.0, 0.0, 100.0, 100.0)
    return make_world(fence, Rect.centered(fence, 25.0, 25.0), step, epsilon)


def desk_world(step: float = 2.0, epsilon: float = DEFAULT_EPSILON) -> WorldModel:
    """40 m fence with a centred 10 m storage; small enough for exact solvers."""
    fence = Rect(0.0, 0.0, 40.0, 40.0)
    return make_world(fence, Rect.centered(fence, 10.0, 10.0), step, epsilon)


def sample_positions(
    world: WorldModel, count: int, rng: np.random.Generator, max_attempts: int | None = None
) -> tuple[list[Point], int]:
    """Rejection-sample ``count`` admissible positions; returns them with the attempt count."""
    if max_attempts is None:
        max_attempts = 1000 * count + 1000
    f = world.fence
    out: list[Point] = []
    attempts = 0
    while len(out) < count:
        if attempts >= max_attempts:
            raise DeploymentError(
                f"placed {len(out)}/{count} jammers after {attempts} attempts"
            )
        batch = min(max(2 * (count - len(out)), 16), max_attempts - attempts)
        xs = rng.uniform(f.min_x, f.max_x, size=batch)
        ys = rng.uniform(f.min_y, f.max_y, size=batch)
        for x, y in zip(xs, ys):
            attempts += 1
            p = Point(float(x), float(y))
            if placement_ok(p, world.storage, world.fence, world.epsilon):
                out.append(p)
                if len(out) == count:
                    break
    return out, attempts


def deploy_jammers(
    world: WorldModel,
    count: int,
    seed: int,
    *,
    capacity: int = 1,
    battery: int | None = None,
    rechargeable: int = 0,
) -> WorldModel:
    """Place ``count`` jammers uniformly in the fence-minus-storage region.

    Ids are ``0..count-1`` in sampling order; the first ``rechargeable`` of
    them are rechargeable. Batteries start at ``battery`` (default: full).
    """
    if count < 1:
        raise ParameterError("count must be >= 1")
    if not 0 <= rechargeable <= count:
        raise ParameterError("rechargeable count outside [0, count]")
    rng = np.random.default_rng(seed)
    positions, _ = sample_positions(world, count, rng)
    battery = capacity if battery is None else battery
    jammers = [
        Jammer(
            id=i,
            position=p,
            kind=Kind.RECHARGEABLE if i < rechargeable else Kind.UNRECHARGEABLE,
            battery=battery,
            capacity=capacity,
        )
        for i, p in enumerate(positions)
    ]
    return world.with_jammers(jammers)


def jammers_at(
    positions: Sequence[Sequence[float]],
    *,
    capacity: int,
    battery: int | None = None,
    kinds: Sequence[Kind] | Kind = Kind.UNRECHARGEABLE,
) -> list[Jammer]:
    """Build jammers with ids ``0..len-1`` at fixed positions."""
    if isinstance(kinds, Kind):
        kinds = [kinds] * len(positions)
    battery = capacity if battery is None else battery
    return [
        Jammer(i, Point(float(p[0]), float(p[1])), k, battery, capacity)
        for i, (p, k) in enumerate(zip(positions, kinds))
    ]
