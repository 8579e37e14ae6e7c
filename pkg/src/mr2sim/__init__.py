"""Discrete-event simulator and protocol library for incremental,
interference-aware (maximally radio-disjoint) multipath routing in
wireless sensor networks, with interference-oblivious multipath and
single-path baselines plus a metrics and campaign harness."""

from .energy import EnergyLedger, EnergyParams, energy_rx, energy_tx, sleep_drain
from .engine import SimConfig, Simulation
from .harness import draw_topology, run_campaign, run_single
from .messages import BePassive, DataPacket, MessageSizes, RouteError, RouteRequest
from .metrics import (
    RunResult,
    built_paths_mean,
    energy_per_delivered_packet,
    fairness_index,
    involved_node_stats,
    mean_delay,
    overhead_energy,
    path_length_ratio,
    per_path_success_share,
    success_ratio_vs_baseline,
    throughput_series,
)
from .node import HC, MR2, SINGLE
from .pathtable import (
    PathTable,
    PathTableEntry,
    apply_request,
    mark_in_use,
    remove_path,
    select_best_path,
)
from .scenario import Scenario, load_scenario, preset
from .topology import (
    Topology,
    generate_randomized_grid,
    radio_range,
    select_sources,
)

__version__ = "0.1.0"

__all__ = [
    "BePassive",
    "DataPacket",
    "EnergyLedger",
    "EnergyParams",
    "HC",
    "MR2",
    "MessageSizes",
    "PathTable",
    "PathTableEntry",
    "RouteError",
    "RouteRequest",
    "RunResult",
    "Scenario",
    "SimConfig",
    "Simulation",
    "SINGLE",
    "Topology",
    "apply_request",
    "built_paths_mean",
    "draw_topology",
    "energy_per_delivered_packet",
    "energy_rx",
    "energy_tx",
    "fairness_index",
    "generate_randomized_grid",
    "involved_node_stats",
    "load_scenario",
    "mark_in_use",
    "mean_delay",
    "overhead_energy",
    "path_length_ratio",
    "per_path_success_share",
    "preset",
    "radio_range",
    "remove_path",
    "run_campaign",
    "run_single",
    "select_best_path",
    "select_sources",
    "sleep_drain",
    "success_ratio_vs_baseline",
    "throughput_series",
]
