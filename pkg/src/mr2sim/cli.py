"""Command-line campaign runner.

Builds a scenario from an optional config file and/or a preset, applies
flag overrides, runs the campaign and writes results.csv plus
metadata.txt (and per-run event logs on request) to the output
directory.  Exits 0 on completion, 2 on validation failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .errors import ScenarioError
from .harness import run_campaign
from .scenario import PRESET_NAMES, Scenario, load_scenario, preset, validate


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mr2sim",
        description="Interference-aware multipath routing simulation campaigns",
    )
    p.add_argument("--config", metavar="FILE", help="scenario document (YAML/JSON)")
    p.add_argument("--preset", choices=sorted(PRESET_NAMES), help="figure preset")
    p.add_argument(
        "--scheme",
        action="append",
        choices=["mr2", "hc", "single"],
        help="scheme to run (repeatable)",
    )
    p.add_argument(
        "--grid-side", action="append", type=int, help="grid side N (repeatable)"
    )
    p.add_argument("--mode", choices=["sparse", "dense"], help="density mode")
    p.add_argument("--seeds", type=int, help="replications per configuration")
    p.add_argument("--campaign-seed", type=int, help="master seed")
    p.add_argument("--out", metavar="DIR", default="out", help="output directory")
    p.add_argument(
        "--emit-event-log", action="store_true", help="write per-run event logs"
    )
    p.add_argument("--sources", type=int, help="transmitting sources per run")
    p.add_argument("--duration", type=float, help="session duration in seconds")
    return p


def scenario_from_args(args) -> Scenario:
    if args.preset:
        sc = preset(args.preset)
    else:
        sc = Scenario()
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
        # config keys land on top of the preset (or the defaults)
        sc = _merge(sc, text)
    overrides = {}
    if args.scheme:
        overrides["schemes"] = tuple(dict.fromkeys(args.scheme))
    if args.grid_side:
        overrides["grid_sides"] = tuple(args.grid_side)
    if args.mode:
        overrides["modes"] = (args.mode,)
    if args.seeds is not None:
        overrides["seeds"] = args.seeds
    if args.campaign_seed is not None:
        overrides["campaign_seed"] = args.campaign_seed
    if args.sources is not None:
        overrides["source_count"] = args.sources
    if args.duration is not None:
        overrides["session_duration"] = args.duration
    if args.emit_event_log:
        overrides["emit_event_log"] = True
    if overrides:
        sc = replace(sc, **overrides)
    return validate(sc)


def _merge(sc: Scenario, text: str) -> Scenario:
    import yaml

    doc = yaml.safe_load(text) or {}
    merged = load_scenario(text)  # validates keys and types
    keys = set(doc.keys())
    values = {
        k: getattr(merged, _canonical(k)) for k in keys
    }
    return replace(sc, **{_canonical(k): v for k, v in values.items()})


def _canonical(key: str) -> str:
    return {"gridSide": "grid_sides", "grid_side": "grid_sides",
            "mode": "modes", "scheme": "schemes"}.get(key, key)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = scenario_from_args(args)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = run_campaign(sc, out_dir=args.out)
    print(f"wrote {len(out.rows)} rows to {args.out}/results.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
