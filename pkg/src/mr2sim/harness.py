"""Seeded replication campaigns with matched-pair scheme runs.

For every (grid side, mode, seed index) the harness draws one topology
and one source set, rejecting and redrawing deployments where a source
cannot reach the sink, then runs every scheme on that identical draw.
Run seeds derive from (campaign seed, grid side, mode, seed index), so
adding schemes or grid sides never perturbs other runs' randomness.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import audit
from .engine import SimConfig, Simulation, event_log_text
from .energy import EnergyParams
from .errors import ScenarioError
from .messages import MessageSizes
from .metrics import CSV_HEADER, RunResult, csv_row, make_result, sort_key
from .node import MR2
from .scenario import Scenario, scenario_lines
from .topology import Topology, generate_randomized_grid, radio_range, select_sources

_MODE_CODE = {"sparse": 0, "dense": 1}


def derive_seed_seq(campaign_seed: int, grid_side: int, mode: str, seed_index: int,
                    stream: int, attempt: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        entropy=(campaign_seed, grid_side, _MODE_CODE[mode], seed_index, stream, attempt)
    )


@dataclass
class DrawRecord:
    grid_side: int
    mode: str
    seed: int
    redraws: int
    sources: list[int]


@dataclass
class CampaignResult:
    results: list[RunResult]
    rows: list[str]
    draws: list[DrawRecord]
    metadata: str

    def csv_text(self) -> str:
        return CSV_HEADER + "\n" + "\n".join(self.rows) + "\n"


def sim_config_for(sc: Scenario, scheme: str, record_frames: bool = False) -> SimConfig:
    return SimConfig(
        scheme=scheme,
        strategy=sc.strategy,
        packet_rate=sc.packet_rate,
        payload_bits=sc.payload_bits,
        session_duration=sc.session_duration,
        session_stagger=sc.session_stagger,
        collect_timeout=sc.collect_timeout,
        csma_jitter=sc.csma_jitter,
        sizes=MessageSizes(
            request_bits=sc.request_bits,
            bepassive_bits=sc.bepassive_bits,
            rerr_bits=sc.rerr_bits,
            data_header_bits=sc.data_header_bits,
        ),
        energy=EnergyParams(
            e_elec=sc.e_elec,
            eps_amp=sc.eps_amp,
            bitrate=sc.bitrate,
            initial_energy=sc.initial_energy,
            sleep_divisor=sc.sleep_divisor,
        ),
        delivery_window=sc.delivery_window,
        delivery_ratio_threshold=sc.delivery_ratio_threshold,
        gap_factor=sc.gap_factor,
        max_paths_mr2=sc.max_paths_mr2,
        max_paths_hc=sc.max_paths_hc,
        rerr_energy_frac=sc.rerr_energy_frac,
        flood_settle_margin=sc.flood_settle_margin,
        run_tail=sc.run_tail,
        record_frames=record_frames or sc.record_frames,
    )


def draw_topology(sc: Scenario, grid_side: int, mode: str, seed_index: int):
    """Topology plus source draw, redrawn until every source reaches the sink."""
    r = radio_range(mode, grid_side)
    for attempt in range(sc.max_redraws):
        ss = derive_seed_seq(sc.campaign_seed, grid_side, mode, seed_index, 0, attempt)
        rng = np.random.default_rng(ss)
        topo = generate_randomized_grid(grid_side, sc.field_size, rng, radio_range=r)
        sources = select_sources(topo, sc.source_count, rng)
        reach = topo.reachable_from_sink()
        if all(reach[s] for s in sources):
            return topo, sources, attempt
    raise ScenarioError(
        f"gridSide {grid_side} {mode}: no connected draw in {sc.max_redraws} attempts"
    )


def run_single(
    sc: Scenario,
    topo: Topology,
    sources: list[int],
    scheme: str,
    grid_side: int,
    mode: str,
    seed_index: int,
    redraws: int = 0,
    record_frames: bool = False,
) -> RunResult:
    """One replication of one scheme; audits radio-disjointness for mr2."""
    ss = derive_seed_seq(sc.campaign_seed, grid_side, mode, seed_index, 1)
    rng = np.random.default_rng(ss)
    sim = Simulation(topo, sources, rng, sim_config_for(sc, scheme, record_frames))
    sim.run()
    result = make_result(sim, scheme, grid_side, mode, seed_index, redraws)
    if scheme == MR2:
        result.disjointness_violations = len(
            audit.check_radio_disjointness(result, topo)
        )
    return result


def run_campaign(sc: Scenario, out_dir: str | None = None) -> CampaignResult:
    """Every (grid, mode, seed) x scheme replication, rows sorted for
    byte-stable output.  With ``out_dir`` set, writes results.csv,
    metadata.txt and optional per-run event logs."""
    results = []
    draws = []
    for grid_side in sc.grid_sides:
        for mode in sc.modes:
            for seed_index in range(sc.seeds):
                topo, sources, redraws = draw_topology(sc, grid_side, mode, seed_index)
                draws.append(
                    DrawRecord(grid_side, mode, seed_index, redraws, sources)
                )
                for scheme in sc.schemes:
                    res = run_single(
                        sc,
                        topo,
                        sources,
                        scheme,
                        grid_side,
                        mode,
                        seed_index,
                        redraws,
                        record_frames=sc.record_frames or sc.emit_event_log,
                    )
                    results.append(res)
    results.sort(key=sort_key)
    rows = [csv_row(r) for r in results]
    metadata = _metadata_text(sc, results, draws)
    out = CampaignResult(results=results, rows=rows, draws=draws, metadata=metadata)
    if out_dir is not None:
        _write_outputs(sc, out, out_dir)
    return out


def _metadata_text(sc: Scenario, results, draws) -> str:
    lines = ["# resolved scenario"]
    lines.extend(scenario_lines(sc))
    lines.append("# draws: gridSide mode seed redraws sources")
    for d in draws:
        src = ",".join(str(s) for s in d.sources)
        lines.append(f"draw {d.grid_side} {d.mode} {d.seed} {d.redraws} {src}")
    lines.append("# per-run: scheme gridSide mode seed status disjointnessViolations")
    for r in sorted(results, key=sort_key):
        viol = r.disjointness_violations
        lines.append(
            f"run {r.scheme} {r.grid_side} {r.mode} {r.seed} ok {viol}"
        )
    return "\n".join(lines) + "\n"


def _write_outputs(sc: Scenario, out: CampaignResult, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "results.csv"), "w") as fh:
        fh.write(out.csv_text())
    with open(os.path.join(out_dir, "metadata.txt"), "w") as fh:
        fh.write(out.metadata)
    if sc.emit_event_log:
        logdir = os.path.join(out_dir, "event-logs")
        os.makedirs(logdir, exist_ok=True)
        for r in out.results:
            if r.frames is None:
                continue
            name = f"{r.scheme}-g{r.grid_side}-{r.mode}-s{r.seed}.log"
            with open(os.path.join(logdir, name), "w") as fh:
                fh.write(event_log_text(r.frames, r.receptions))


# -- matched-pair helpers ------------------------------------------------------


def pair_runs(results):
    """Group runs by (gridSide, mode, seed) -> {scheme: RunResult}."""
    groups = {}
    for r in results:
        groups.setdefault((r.grid_side, r.mode, r.seed), {})[r.scheme] = r
    return groups


def baseline_ratio(results, scheme: str, value, baseline_scheme: str = "single"):
    """Mean of value(run)/value(baseline) over matched groups with both runs."""
    ratios = []
    for group in pair_runs(results).values():
        if scheme in group and baseline_scheme in group:
            a = value(group[scheme])
            b = value(group[baseline_scheme])
            if b > 0:
                ratios.append(a / b)
    if not ratios:
        raise ScenarioError("no matched pairs available")
    return sum(ratios) / len(ratios)
