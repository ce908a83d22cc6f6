"""Battery bookkeeping: jammer kinds, dead/full/normal classes, per-slot energy change."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Iterable, Sequence

from jamsched.errors import JamschedError, ParameterError, SelectionError
from jamsched.geometry import Point

if TYPE_CHECKING:
    from jamsched.sinr import NetworkConfig


class Kind(str, enum.Enum):
    UNRECHARGEABLE = "unrechargeable"
    RECHARGEABLE = "rechargeable"


@dataclass(frozen=True)
class Jammer:
    id: int
    position: Point
    kind: Kind
    battery: int
    capacity: int

    def __post_init__(self):
        if self.capacity <= 0:
            raise ParameterError(f"jammer {self.id}: capacity must be positive")
        if not 0 <= self.battery <= self.capacity:
            raise ParameterError(
                f"jammer {self.id}: battery {self.battery} outside [0, {self.capacity}]"
            )

    @property
    def rechargeable(self) -> bool:
        return self.kind is Kind.RECHARGEABLE

    def lifespan(self, c: int) -> int:
        """Number of active slots the current battery can fund."""
        return self.battery // c


@dataclass(frozen=True)
class Classification:
    dead: frozenset[int]
    full: frozenset[int]
    normal: frozenset[int]
    unrechargeable: frozenset[int]
    rechargeable: frozenset[int]
    # dead jammers already at capacity (only possible when capacity < c)
    saturated: frozenset[int] = frozenset()

    @property
    def alive(self) -> frozenset[int]:
        return self.full | self.normal

    @property
    def case(self) -> str:
        """Which objective form applies: ``pure-UJ``, ``pure-RJ`` or ``hybrid``."""
        if not self.rechargeable:
            return "pure-UJ"
        if not self.unrechargeable:
            return "pure-RJ"
        return "hybrid"


def classify(jammers: Iterable[Jammer], cfg: "NetworkConfig") -> Classification:
    """Dead means the battery cannot fund one active slot (``battery < c``)."""
    dead, full, normal, uj, rj, saturated = set(), set(), set(), set(), set(), set()
    for j in jammers:
        (rj if j.rechargeable else uj).add(j.id)
        if j.battery < cfg.c:
            dead.add(j.id)
            if j.battery == j.capacity:
                saturated.add(j.id)
        elif j.battery == j.capacity:
            full.add(j.id)
        else:
            normal.add(j.id)
    return Classification(
        frozenset(dead),
        frozenset(full),
        frozenset(normal),
        frozenset(uj),
        frozenset(rj),
        frozenset(saturated),
    )


def _check_selection(selection: frozenset[int], cls: Classification) -> None:
    unknown = selection - cls.unrechargeable - cls.rechargeable
    if unknown:
        raise SelectionError(f"unknown jammer ids {sorted(unknown)}")
    dead = selection & cls.dead
    if dead:
        raise SelectionError(f"dead jammers selected: {sorted(dead)}")


def charging_credit(cls: Classification) -> int:
    """Units gained by dead rechargeable jammers below capacity.

    They can never be selected, so they charge every slot whatever the
    selection is.
    """
    return len((cls.rechargeable & cls.dead) - cls.saturated)


def energy_delta(selection: Iterable[int], cls: Classification, cfg: "NetworkConfig") -> int:
    """Energy consumed minus energy gained over one slot.

    Follows the three objective forms of the greedy scheduler. The charging
    credit also counts dead rechargeable jammers: they sit below ``c`` and
    therefore below capacity, so they charge like normal ones.
    """
    sel = frozenset(selection)
    _check_selection(sel, cls)
    c = cfg.c
    charging_dead = charging_credit(cls)
    case = cls.case
    if case == "pure-UJ":
        return c * len(sel & cls.alive)
    if case == "pure-RJ":
        return (
            (c + 1) * len(sel & cls.normal)
            + c * len(sel & cls.full)
            - len(cls.normal)
            - charging_dead
        )
    rn = cls.rechargeable & cls.normal
    delta_u = c * len(sel & cls.unrechargeable & cls.alive)
    delta_r = (
        (c + 1) * len(sel & rn)
        + c * len(sel & cls.rechargeable & cls.full)
        - len(rn)
        - charging_dead
    )
    return delta_u + delta_r


def apply_slot(
    jammers: Sequence[Jammer], selection: Iterable[int], cfg: "NetworkConfig"
) -> tuple[Jammer, ...]:
    """Advance every battery by one slot with ``selection`` active.

    Active jammers pay ``c``; idle rechargeable jammers below capacity gain
    one unit; everything else is unchanged.
    """
    sel = frozenset(selection)
    ids = {j.id for j in jammers}
    if not sel <= ids:
        raise SelectionError(f"unknown jammer ids {sorted(sel - ids)}")
    out = []
    for j in jammers:
        if j.id in sel:
            if j.battery < cfg.c:
                raise SelectionError(f"dead jammer {j.id} selected")
            out.append(replace(j, battery=j.battery - cfg.c))
        elif j.rechargeable and j.battery < j.capacity:
            out.append(replace(j, battery=j.battery + 1))
        else:
            out.append(j)
    if any(j.battery < 0 for j in out):  # pragma: no cover - guarded above
        raise JamschedError("negative battery after slot")
    return tuple(out)
