"""Run-level metric record and the reported quantities.

All functions are pure over completed RunResult values.  Baseline-
relative metrics must only be fed matched runs (same topology, sources
and seed), which the campaign runner guarantees by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UndefinedMetricError

CSV_HEADER = (
    "scheme,gridSide,mode,seed,sources,sent,delivered,successRatio,builtPaths,"
    "meanHops,meanDelay_s,controlEnergy_J,totalEnergy_J,energyPerDelivered_J,"
    "overheadPerDelivered_J,involvedNodes,fairness"
)


@dataclass
class RunResult:
    """Everything a finished replication reports."""

    scheme: str
    grid_side: int
    mode: str
    seed: int
    source_ids: list[int]
    sent: int
    delivered: int
    sent_by_source: dict
    delivered_by_source: dict
    sent_by_path: dict
    delivered_by_path: dict
    delay_samples: list[float]
    deliveries: list  # (t, delay, session, path_id)
    activations: list  # engine.PathActivation
    floods: list  # engine.FloodRecord
    discovery_failures: int
    m_counts: dict  # node -> processed data messages (relay forwards)
    inst_forwarders: dict  # (session, path, instance) -> set of nodes
    delivered_traces: list  # (session, seq, trace tuple)
    energy_by_node: dict  # {"tx","rx","sleep","idle"} -> np.ndarray
    energy_by_class: dict  # class -> (tx_J, rx_J)
    initial_energy: float
    bepassive_tx: int
    rerr_tx: int
    suppressed_frames: int
    route_drops: int
    collisions: dict
    frames_tx: dict
    t_final: float
    redraws: int = 0
    disjointness_violations: int = -1  # -1: not checked
    frames: list | None = None
    receptions: list | None = None

    @property
    def total_energy(self) -> float:
        return float(sum(arr.sum() for arr in self.energy_by_node.values()))

    @property
    def session_count(self) -> int:
        return len(self.source_ids)


# -- point metrics -------------------------------------------------------------


def fairness_index(counts) -> float:
    """Load-fairness index (sum m)^2 / (n * sum m^2) over involved nodes.

    1.0 means perfectly even load; 1/n means a single contributor.
    """
    m = list(counts)
    if not m or all(v == 0 for v in m):
        raise UndefinedMetricError("fairness needs at least one positive count")
    if any(v < 0 for v in m):
        raise UndefinedMetricError("counts must be non-negative")
    total = float(sum(m))
    sq = float(sum(v * v for v in m))
    return total * total / (len(m) * sq)


def success_ratio_vs_baseline(delivered: int, delivered_baseline: int) -> float:
    """Delivered-packet ratio against the matched single-path run."""
    if delivered_baseline <= 0:
        raise UndefinedMetricError("baseline delivered nothing")
    return delivered / delivered_baseline


def path_length_ratio(mean_hops_scheme: float, mean_hops_single: float) -> float:
    if mean_hops_single <= 0:
        raise UndefinedMetricError("single-path hop count must be positive")
    return mean_hops_scheme / mean_hops_single


def involved_nodes(run: RunResult) -> int:
    """Count of relays that processed at least one data message."""
    return sum(1 for v in run.m_counts.values() if v >= 1)


def involved_node_stats(run_a: RunResult, run_b: RunResult):
    """(count_a, count_b, count_a / count_b)."""
    ca = involved_nodes(run_a)
    cb = involved_nodes(run_b)
    if cb == 0:
        raise UndefinedMetricError("second run involved no nodes")
    return ca, cb, ca / cb


def run_fairness(run: RunResult) -> float:
    return fairness_index([v for v in run.m_counts.values() if v >= 1])


def mean_delay(samples) -> float:
    samples = list(samples)
    if not samples:
        raise UndefinedMetricError("no delay samples")
    return float(sum(samples) / len(samples))


def throughput_series(deliveries, bucket: float = 1.0):
    """(bucket_start_time, delivered_count) pairs over the run."""
    if bucket <= 0:
        raise UndefinedMetricError("bucket must be positive")
    counts = {}
    for item in deliveries:
        t = item[0] if isinstance(item, tuple) else float(item)
        b = math.floor(t / bucket)
        counts[b] = counts.get(b, 0) + 1
    return [(b * bucket, counts[b]) for b in sorted(counts)]


def built_paths_count(run: RunResult) -> float:
    """Mean path activations per session (repair rebuilds count as new)."""
    if run.session_count == 0:
        raise UndefinedMetricError("run has no sessions")
    return len(run.activations) / run.session_count


def built_paths_mean(runs) -> float:
    vals = [built_paths_count(r) for r in runs]
    if not vals:
        raise UndefinedMetricError("no runs")
    return float(sum(vals) / len(vals))


def mean_hops(run: RunResult) -> float:
    if not run.activations:
        raise UndefinedMetricError("run built no paths")
    return float(sum(a.hops for a in run.activations) / len(run.activations))


def per_path_success_share(run: RunResult) -> dict:
    """Fraction of delivered packets carried by each (session, path)."""
    if run.delivered == 0:
        raise UndefinedMetricError("nothing delivered")
    return {k: v / run.delivered for k, v in run.delivered_by_path.items()}


def overhead_energy(
    run: RunResult,
    per_delivered: bool = False,
    include_bepassive: bool = True,
    include_rerr: bool = True,
) -> float:
    """Joules attributed to routing control traffic.

    Request frames always count; suppression notices and route errors
    are included by default and can be excluded to isolate the
    discovery-flood cost alone.
    """
    total = _class_energy(run, "request")
    if include_bepassive:
        total += _class_energy(run, "bepassive")
    if include_rerr:
        total += _class_energy(run, "rerr")
    if per_delivered:
        if run.delivered == 0:
            raise UndefinedMetricError("nothing delivered")
        return total / run.delivered
    return total


def energy_per_delivered_packet(run: RunResult) -> float:
    if run.delivered == 0:
        raise UndefinedMetricError("nothing delivered")
    return run.total_energy / run.delivered


def _class_energy(run: RunResult, cls: str) -> float:
    tx, rx = run.energy_by_class.get(cls, (0.0, 0.0))
    return tx + rx


def control_energy(run: RunResult) -> float:
    return overhead_energy(run, per_delivered=False)


# -- CSV emission ------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return "%.9g" % x
    return str(x)


def csv_row(run: RunResult) -> str:
    """One results.csv row; undefined per-delivered metrics print as nan."""
    nan = float("nan")
    success = run.delivered / run.sent if run.sent > 0 else nan
    built = built_paths_count(run) if run.session_count else nan
    hops = mean_hops(run) if run.activations else nan
    delay = mean_delay(run.delay_samples) if run.delay_samples else nan
    ctrl = control_energy(run)
    total = run.total_energy
    epp = total / run.delivered if run.delivered else nan
    opp = ctrl / run.delivered if run.delivered else nan
    inv = involved_nodes(run)
    fair = run_fairness(run) if inv else nan
    cells = [
        run.scheme,
        run.grid_side,
        run.mode,
        run.seed,
        len(run.source_ids),
        run.sent,
        run.delivered,
        _fmt(success),
        _fmt(built),
        _fmt(hops),
        _fmt(delay),
        _fmt(ctrl),
        _fmt(total),
        _fmt(epp),
        _fmt(opp),
        inv,
        _fmt(fair),
    ]
    return ",".join(str(c) for c in cells)


def sort_key(run: RunResult):
    return (run.scheme, run.grid_side, run.mode, run.seed)


def make_result(sim, scheme, grid_side, mode, seed, redraws=0) -> RunResult:
    """Assemble the immutable result record from a finished Simulation."""
    return RunResult(
        scheme=scheme,
        grid_side=grid_side,
        mode=mode,
        seed=seed,
        source_ids=list(sim.sources),
        sent=sim.sent,
        delivered=sim.delivered,
        sent_by_source=dict(sim.sent_by_source),
        delivered_by_source=dict(sim.delivered_by_source),
        sent_by_path=dict(sim.sent_by_path),
        delivered_by_path=dict(sim.delivered_by_path),
        delay_samples=list(sim.delay_samples),
        deliveries=list(sim.deliveries),
        activations=list(sim.activations),
        floods=list(sim.floods),
        discovery_failures=sim.discovery_failures,
        m_counts=dict(sim.m_counts),
        inst_forwarders={k: set(v) for k, v in sim.inst_forwarders.items()},
        delivered_traces=list(sim.delivered_traces),
        energy_by_node=sim.ledger.arrays(),
        energy_by_class={k: (v[0], v[1]) for k, v in sim.ledger.by_class.items()},
        initial_energy=sim.ledger.params.initial_energy,
        bepassive_tx=sim.bepassive_tx,
        rerr_tx=sim.rerr_tx,
        suppressed_frames=sim.suppressed_frames,
        route_drops=sim.route_drops,
        collisions=dict(sim.collisions),
        frames_tx=dict(sim.frames_tx),
        t_final=sim.t_final,
        redraws=redraws,
        frames=sim.frames,
        receptions=sim.receptions,
    )


def energy_attribution_gap(run: RunResult) -> float:
    """Relative gap between per-class and per-node tx+rx energy totals."""
    per_class = sum(tx + rx for tx, rx in run.energy_by_class.values())
    per_node = float(run.energy_by_node["tx"].sum() + run.energy_by_node["rx"].sum())
    denom = max(per_node, 1e-30)
    return abs(per_class - per_node) / denom
