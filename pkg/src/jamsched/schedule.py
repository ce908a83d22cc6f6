"""Slot schedules and their replay through the battery ledger."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from jamsched.energy import apply_slot, classify, energy_delta
from jamsched.errors import SelectionError
from jamsched.sinr import NetworkConfig, constraint_field
from jamsched.world import WorldModel


class Termination(str, enum.Enum):
    DEAD = "Dead"
    SLOT_CAP = "SlotCapReached"


@dataclass(frozen=True)
class Schedule:
    slots: tuple[frozenset[int], ...]
    termination: Termination
    final_batteries: Mapping[int, int]
    deltas: tuple[int, ...] = ()

    @property
    def lifetime(self) -> int:
        return len(self.slots)

    def dump(self) -> str:
        """One line per slot with the activated ids, space separated."""
        return "".join(" ".join(str(j) for j in sorted(s)) + "\n" for s in self.slots)


@dataclass(frozen=True)
class Replay:
    world: WorldModel
    deltas: tuple[int, ...]


def replay(world: WorldModel, cfg: NetworkConfig, slots: Iterable[Iterable[int]]) -> Replay:
    """Run ``slots`` through the ledger, checking each one as it is activated.

    Every slot must be reliable and avoid dead jammers, and the total battery
    drop must equal the slot's energy delta.
    """
    field = constraint_field(world, cfg)
    deltas = []
    for t, slot in enumerate(slots):
        slot = frozenset(slot)
        if not field.reliable(slot):
            raise SelectionError(f"slot {t} activates an unreliable set {sorted(slot)}")
        cls = classify(world.jammers, cfg)
        delta = energy_delta(slot, cls, cfg)
        before = sum(j.battery for j in world.jammers)
        world = world.with_jammers(apply_slot(world.jammers, slot, cfg))
        drop = before - sum(j.battery for j in world.jammers)
        if drop != delta:  # pragma: no cover - ledger conservation
            raise AssertionError(f"slot {t}: battery drop {drop} != delta {delta}")
        deltas.append(delta)
    return Replay(world, tuple(deltas))


def batteries(world: WorldModel) -> dict[int, int]:
    return {j.id: j.battery for j in world.jammers}
