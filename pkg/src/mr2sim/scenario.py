"""Campaign configuration: defaults, document loading, figure presets.

A scenario document is a flat YAML/JSON mapping.  Every knob has a
default; unknown keys are rejected by name.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

import yaml

from .errors import ScenarioError
from .node import HC, MR2, SCHEMES, SINGLE

MODES = ("sparse", "dense")
STRATEGIES = ("round_robin_split", "duplicate")

PRESET_NAMES = (
    "paths-ratio",
    "built-paths",
    "success",
    "throughput",
    "per-path-success",
    "delay",
    "overhead",
    "overhead-per-msg",
    "energy-per-msg-short",
    "energy-per-msg-long",
    "fairness",
    "involved-nodes",
)


@dataclass(frozen=True)
class Scenario:
    # sweep axes
    grid_sides: tuple = (7, 10, 15)
    modes: tuple = ("sparse", "dense")
    schemes: tuple = (MR2, HC, SINGLE)
    seeds: int = 20
    campaign_seed: int = 12345
    # deployment
    field_size: float = 1000.0
    source_count: int = 3
    # traffic
    session_duration: float = 15.0
    packet_rate: float = 10.0
    payload_bits: int = 1024
    strategy: str = "round_robin_split"
    session_stagger: float = 1.0
    # protocol
    collect_timeout: float = 2.0
    delivery_window: int = 20
    delivery_ratio_threshold: float = 0.8
    gap_factor: float = 3.0
    max_paths_mr2: int = 4
    max_paths_hc: int = 0  # 0: unbounded
    rerr_energy_frac: float = 0.05
    flood_settle_margin: float = 2.0
    # medium and energy
    csma_jitter: float = 0.005
    bitrate: float = 250000.0
    e_elec: float = 50e-9
    eps_amp: float = 100e-12
    initial_energy: float = 2.0
    sleep_divisor: float = 100.0
    request_bits: int = 240
    bepassive_bits: int = 96
    rerr_bits: int = 96
    data_header_bits: int = 96
    # run plumbing
    run_tail: float = 2.0
    throughput_bucket: float = 1.0
    max_redraws: int = 50
    record_frames: bool = False
    emit_event_log: bool = False


_FIELD_TYPES = {f.name: f.type for f in fields(Scenario)}

_LIST_FIELDS = {"grid_sides": int, "modes": str, "schemes": str}

_POSITIVE = {
    "seeds",
    "field_size",
    "source_count",
    "session_duration",
    "packet_rate",
    "payload_bits",
    "collect_timeout",
    "delivery_window",
    "delivery_ratio_threshold",
    "gap_factor",
    "max_paths_mr2",
    "rerr_energy_frac",
    "csma_jitter",
    "bitrate",
    "e_elec",
    "eps_amp",
    "initial_energy",
    "sleep_divisor",
    "request_bits",
    "bepassive_bits",
    "rerr_bits",
    "data_header_bits",
    "throughput_bucket",
    "session_stagger",
}


def _coerce(name, value):
    if name in _LIST_FIELDS:
        elem = _LIST_FIELDS[name]
        if not isinstance(value, (list, tuple)):
            value = [value]
        try:
            return tuple(elem(v) for v in value)
        except (TypeError, ValueError):
            raise ScenarioError(f"{name}: expected a list of {elem.__name__}") from None
    default = getattr(Scenario(), name)
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ScenarioError(f"{name}: expected a boolean")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ScenarioError(f"{name}: expected an integer")
        return int(value)
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"{name}: expected a number")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ScenarioError(f"{name}: expected a string")
        return value
    raise ScenarioError(f"{name}: unsupported value")


def validate(sc: Scenario) -> Scenario:
    for name in _POSITIVE:
        if getattr(sc, name) <= 0:
            raise ScenarioError(f"{name}: must be positive")
    for g in sc.grid_sides:
        if g < 1:
            raise ScenarioError("gridSide: must be >= 1")
    if not sc.grid_sides:
        raise ScenarioError("gridSide: need at least one value")
    for m in sc.modes:
        if m not in MODES:
            raise ScenarioError(f"mode: unknown mode {m!r}")
    for s in sc.schemes:
        if s not in SCHEMES:
            raise ScenarioError(f"scheme: unknown scheme {s!r}")
    if sc.strategy not in STRATEGIES:
        raise ScenarioError(f"strategy: unknown strategy {sc.strategy!r}")
    if sc.max_paths_hc < 0:
        raise ScenarioError("max_paths_hc: must be >= 0")
    if not 0 < sc.delivery_ratio_threshold <= 1:
        raise ScenarioError("delivery_ratio_threshold: must be in (0, 1]")
    for g in sc.grid_sides:
        if sc.source_count > g * g:
            raise ScenarioError("source_count: more sources than sensor nodes")
    return sc


def load_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document (YAML or JSON)."""
    doc = yaml.safe_load(text)
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a mapping")
    overrides = {}
    for key, value in doc.items():
        if key == "gridSide" or key == "grid_side":
            key = "grid_sides"
        if key == "mode":
            key = "modes"
        if key == "scheme":
            key = "schemes"
        if key not in _FIELD_TYPES:
            raise ScenarioError(f"unknown key {key!r}")
        overrides[key] = _coerce(key, value)
    return validate(Scenario(**overrides))


def preset(name: str) -> Scenario:
    """Desk-scale scenario mirroring one of the standard exhibits."""
    if name not in PRESET_NAMES:
        raise ScenarioError(f"unknown preset {name!r}")
    base = Scenario()
    if name in ("paths-ratio", "success", "throughput", "delay"):
        return base  # all three schemes, both modes
    if name in ("built-paths", "per-path-success", "overhead", "overhead-per-msg",
                "fairness", "involved-nodes"):
        return replace(base, schemes=(MR2, HC))
    if name == "energy-per-msg-short":
        return replace(base, schemes=(MR2, HC), session_duration=15.0)
    if name == "energy-per-msg-long":
        # long sessions need a budget that outlives 300 s of idle listening
        return replace(
            base,
            schemes=(MR2, HC),
            session_duration=300.0,
            initial_energy=20.0,
            seeds=10,
            grid_sides=(7, 10, 15),
        )
    raise ScenarioError(f"unknown preset {name!r}")


def scenario_lines(sc: Scenario) -> list[str]:
    """Deterministic key = value lines of the fully resolved scenario."""
    out = []
    for f in fields(Scenario):
        v = getattr(sc, f.name)
        if isinstance(v, tuple):
            v = list(v)
        out.append(f"{f.name} = {v}")
    return out
