"""JSON snapshots of a deployed world."""

from __future__ import annotations

import json
from typing import Any

from jamsched.energy import Jammer, Kind
from jamsched.errors import ConfigError
from jamsched.geometry import Point, Rect
from jamsched.world import WorldModel, make_world


def world_to_dict(world: WorldModel, step: float) -> dict[str, Any]:
    def rect(r: Rect):
        return [r.min_x, r.min_y, r.max_x, r.max_y]

    return {
        "fence": rect(world.fence),
        "storage": rect(world.storage),
        "step": step,
        "epsilon": world.epsilon,
        "jammers": [
            {
                "id": j.id,
                "x": j.position.x,
                "y": j.position.y,
                "kind": j.kind.value,
                "battery": j.battery,
                "capacity": j.capacity,
            }
            for j in world.jammers
        ],
    }


def world_from_dict(data: dict[str, Any]) -> tuple[WorldModel, float]:
    try:
        step = float(data["step"])
        world = make_world(
            Rect(*data["fence"]), Rect(*data["storage"]), step, float(data["epsilon"])
        )
        jammers = [
            Jammer(
                int(j["id"]),
                Point(float(j["x"]), float(j["y"])),
                Kind(j["kind"]),
                int(j["battery"]),
                int(j["capacity"]),
            )
            for j in data["jammers"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad world file: {exc}") from None
    return world.with_jammers(jammers), step


def dumps(world: WorldModel, step: float) -> str:
    return json.dumps(world_to_dict(world, step), indent=2) + "\n"


def loads(text: str) -> tuple[WorldModel, float]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad world file: {exc}") from None
    return world_from_dict(data)
