"""Command-line entry point: ``jamsched {deploy,schedule,analyze,sweep,export-ilp}``."""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

from jamsched import worldio
from jamsched.errors import JamschedError, ResourceError
from jamsched.greedy import DEFAULT_MAX_SLOTS, build_slot_ilp, greedy_schedule
from jamsched.harness import (
    ALGORITHMS,
    ExperimentSpec,
    emit_csv,
    load_config,
    run_experiment,
)
from jamsched.ilp import export_model
from jamsched.lifetime import baseline_slots, infinite_lifetime_certificate
from jamsched.mrs import mrs_schedule
from jamsched.schedule import Schedule, Termination, batteries, replay
from jamsched.sinr import active_count_bounds, constraint_field


@contextmanager
def _sink(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _spec(args) -> ExperimentSpec:
    return load_config(args.config) if args.config else ExperimentSpec()


def _world(args):
    """World from ``--world`` if given, else deployed from the config's base point."""
    spec = _spec(args)
    point = spec.point(None, None)
    if getattr(args, "world", None):
        with open(args.world, encoding="utf-8") as fh:
            world, _ = worldio.loads(fh.read())
    else:
        world = point.deploy(spec.geometry(), args.seed)
    return world, point.cfg, spec


def cmd_deploy(args) -> int:
    spec = _spec(args)
    world = spec.point(None, None).deploy(spec.geometry(), args.seed)
    with _sink(args.out) as out:
        out.write(worldio.dumps(world, spec.step))
    return 0


def cmd_schedule(args) -> int:
    world, cfg, spec = _world(args)
    max_slots = args.max_slots if args.max_slots is not None else spec.max_slots
    if args.algorithm == "greedy":
        try:
            sched = greedy_schedule(world, cfg, max_slots)
        except ResourceError as exc:
            print(f"error: {exc}", file=sys.stderr)
            if exc.partial is not None:
                with _sink(args.out) as out:
                    out.write(exc.partial.dump())
            return 3
    elif args.algorithm == "mrs":
        sched = mrs_schedule(world, cfg)
    else:
        slots = baseline_slots(world, cfg, max_slots)
        run = replay(world, cfg, slots)
        term = Termination.SLOT_CAP if len(slots) >= max_slots else Termination.DEAD
        sched = Schedule(tuple(slots), term, batteries(run.world), run.deltas)
    with _sink(args.out) as out:
        out.write(sched.dump())
    print(f"lifetime={sched.lifetime} termination={sched.termination.value}", file=sys.stderr)
    return 0


def cmd_analyze(args) -> int:
    world, cfg, _ = _world(args)
    cert = infinite_lifetime_certificate(world, cfg)
    lower, upper = active_count_bounds(world, cfg)
    reliable = constraint_field(world, cfg).reliable(world.ids)
    lines = [
        f"jammers={len(world.jammers)}",
        f"full_set_reliable={'true' if reliable else 'false'}",
        f"bounds=[{lower}, {upper}]",
        f"l_jam={'' if cert.l_jam is None else cert.l_jam}",
        f"rechargeable={cert.rechargeable}",
        f"required={'' if cert.required is None else cert.required}",
        f"verdict={cert.verdict.value}",
    ]
    for k, s in enumerate(cert.plan):
        lines.append(f"plan[{k}]=" + " ".join(str(j) for j in sorted(s)))
    with _sink(args.out) as out:
        out.write("\n".join(lines) + "\n")
    return 0


def cmd_sweep(args) -> int:
    spec = load_config(args.spec)
    records = run_experiment(spec)
    with _sink(args.out) as out:
        emit_csv(records, out, timing=args.timing)
    return 0


def cmd_export_ilp(args) -> int:
    world, cfg, _ = _world(args)
    slot = build_slot_ilp(world, cfg)
    with _sink(args.out) as out:
        out.write(export_model(slot.model))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jamsched", description="Friendly-jammer activation scheduling.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, world=True):
        sp.add_argument("--config", metavar="PATH", help="INI experiment config (default: desk profile)")
        sp.add_argument("--seed", type=int, default=0, help="deployment seed (default 0)")
        sp.add_argument("--out", metavar="PATH", help="output file (default stdout)")
        if world:
            sp.add_argument("--world", metavar="PATH", help="world JSON written by 'deploy'")

    sp = sub.add_parser("deploy", help="deploy jammers and write the world as JSON")
    common(sp, world=False)
    sp.set_defaults(func=cmd_deploy)

    sp = sub.add_parser("schedule", help="schedule a world; one line of active ids per slot")
    common(sp)
    sp.add_argument("--algorithm", choices=ALGORITHMS, default="greedy")
    sp.add_argument("--max-slots", type=int, default=None, help=f"slot cap (default {DEFAULT_MAX_SLOTS})")
    sp.set_defaults(func=cmd_schedule)

    sp = sub.add_parser("analyze", help="L_jam, active-count bounds and the infinite-lifetime check")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    sp.add_argument("--spec", metavar="PATH", required=True)
    sp.add_argument("--out", metavar="PATH")
    sp.add_argument("--timing", action="store_true", help="include the wall_time column")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("export-ilp", help="write the first slot's model in the text LP format")
    common(sp)
    sp.set_defaults(func=cmd_export_ilp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except JamschedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
