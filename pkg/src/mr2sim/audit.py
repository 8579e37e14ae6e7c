"""Post-hoc run audits against the topology and the recorded event log.

These checks recompute protocol guarantees from first principles rather
than trusting the kernel's bookkeeping:

* radio-disjointness: no intermediate of a later-established path may be
  adjacent to (or shared with) an intermediate of a path that was still
  in use when the later one formed;
* collision soundness: an independent sweep over the recorded airtime
  intervals must agree with every decode/collide verdict the medium
  issued;
* loop freedom: a delivered packet crossed each relay at most once;
* variant purity: baselines never use the suppression machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .engine import OUT_COLLIDED, OUT_DECODED
from .messages import BEPASSIVE
from .metrics import RunResult
from .topology import Topology


@dataclass
class DisjointnessViolation:
    earlier: tuple  # (session, path_id, instance)
    later: tuple
    node_earlier: int
    node_later: int
    shared: bool


def _adjacency_sets(topology: Topology):
    indptr, indices = topology.neighbor_arrays()
    return [
        set(int(v) for v in indices[indptr[k]:indptr[k + 1]])
        for k in range(topology.node_count)
    ]


def check_radio_disjointness(run: RunResult, topology: Topology):
    """All violations of pairwise path separation in one run.

    A path instance participates once data flowed on it (it has at least
    one recorded forwarder, or it established a delivery).  Instances
    are ordered by the time data first flowed; an earlier instance
    constrains a later one only if it had not been retired before the
    later one formed.
    """
    paths = []
    for act in run.activations:
        key = (act.session, act.path_id, act.instance)
        inter = run.inst_forwarders.get(key, set())
        t0 = act.t_first_forward
        if t0 is None:
            t0 = act.t_established
        if t0 is None:
            continue  # no data ever flowed; not a participant
        retired = act.t_retired if act.t_retired is not None else float("inf")
        paths.append((t0, retired, key, inter))
    paths.sort(key=lambda p: p[0])
    nbr = _adjacency_sets(topology)
    violations = []
    for j in range(len(paths)):
        tj, _, key_j, inter_j = paths[j]
        for i in range(j):
            ti, retired_i, key_i, inter_i = paths[i]
            if retired_i <= tj:
                continue  # no longer in use when the later path formed
            for x in inter_j:
                if x in inter_i:
                    violations.append(
                        DisjointnessViolation(key_i, key_j, x, x, True)
                    )
                    continue
                hits = nbr[x] & inter_i
                for y in hits:
                    violations.append(
                        DisjointnessViolation(key_i, key_j, y, x, False)
                    )
    return violations


def check_loop_freedom(run: RunResult):
    """Delivered packets whose hop trace visited some relay twice."""
    bad = []
    for session, seq, trace in run.delivered_traces:
        if len(set(trace)) != len(trace):
            bad.append((session, seq, trace))
    return bad


def check_variant_purity(run: RunResult):
    """Scheme-specific frame constraints; returns a list of complaints."""
    problems = []
    if run.scheme == "hc" and run.bepassive_tx != 0:
        problems.append(f"hc run transmitted {run.bepassive_tx} bepassive frames")
    if run.scheme == "single":
        per_session = {}
        for fl in run.floods:
            if not fl.is_repair:
                per_session[fl.session] = per_session.get(fl.session, 0) + 1
        for session, count in per_session.items():
            if count != 1:
                problems.append(
                    f"single run issued {count} non-repair floods for session {session}"
                )
    return problems


def scan_collisions(run: RunResult, topology: Topology):
    """Independent brute-force re-derivation of every decode/collide verdict.

    Builds the full audible-interval timeline per receiver from the
    frame log (charged receptions plus each sender's own transmissions),
    sorts it, and flags overlaps with a sweep.  Returns
    ``(checked, mismatches)`` where mismatches is a list of
    (frame_id, receiver, logged_outcome, recomputed_outcome).
    """
    if run.frames is None or run.receptions is None:
        raise ValueError("run was not recorded; rerun with record_frames")
    frames = {f.fid: f for f in run.frames}

    rows_recv = []
    rows_start = []
    rows_end = []
    rows_fid = []
    resolved = []
    logged = []
    for fid, r, outcome in run.receptions:
        f = frames[fid]
        rows_recv.append(r)
        rows_start.append(f.start)
        rows_end.append(f.end)
        rows_fid.append(fid)
        check = f.cls not in (BEPASSIVE,) and outcome in (OUT_DECODED, OUT_COLLIDED)
        resolved.append(check)
        logged.append(outcome)
    for f in run.frames:
        if f.suppressed:
            continue
        rows_recv.append(f.sender)
        rows_start.append(f.start)
        rows_end.append(f.end)
        rows_fid.append(f.fid)
        resolved.append(False)
        logged.append("")

    recv = np.asarray(rows_recv, dtype=np.int64)
    start = np.asarray(rows_start, dtype=np.float64)
    end = np.asarray(rows_end, dtype=np.float64)
    order = np.lexsort((start, recv))
    flags = _kernels.overlap_flags(recv[order], start[order], end[order])

    checked = 0
    mismatches = []
    for pos, idx in enumerate(order):
        if not resolved[idx]:
            continue
        checked += 1
        expect = OUT_COLLIDED if flags[pos] else OUT_DECODED
        if expect != logged[idx]:
            mismatches.append((rows_fid[idx], rows_recv[idx], logged[idx], expect))
    return checked, mismatches
