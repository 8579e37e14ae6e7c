"""Deterministic discrete-event kernel with a collision-based radio medium.

One Simulation instance runs one replication: a fixed topology, a fixed
source draw, one scheme.  Events are processed in (time, tie-break)
order; the tie-break is assigned monotonically at scheduling time, so
runs are bit-reproducible for a fixed seed.

Radio model: every transmission is a broadcast frame at fixed power
(energy priced at the full radio range).  A frame is decoded by an
awake, alive neighbor iff no other audible frame overlaps any part of
its airtime at that receiver (no capture).  Receivers are charged
reception energy for every audible frame, decoded or not, and a node
half-duplexes: its own transmissions are audible to itself.  Suppression
notices (bepassive frames) are modeled as a reliable control channel:
they occupy airtime and interfere with other frames, but always decode.
Passive nodes sleep: they neither receive nor are charged per frame.

Energy: transmissions and receptions are charged per frame; idle
listening and sleep are integrated lazily per node from its state
intervals and settled whenever the node is touched and once more at the
end of the run.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import node as nd
from .energy import EnergyLedger, EnergyParams, energy_rx, energy_tx
from .messages import (
    BEPASSIVE,
    BROADCAST,
    DATA,
    REQUEST,
    RERR,
    BePassive,
    DataPacket,
    MessageSizes,
    RouteError,
    RouteRequest,
)
from .topology import Topology

EV_TXSTART = 0
EV_TXEND = 1
EV_TIMER = 2
EV_APPSEND = 3

TT_SESSION_START = 0
TT_COLLECT = 1
TT_STALE = 2
TT_FLOOD_TIMEOUT = 3
TT_BEPASSIVE = 4
TT_FLOOD_GATE = 5

OUT_DECODED = "decoded"
OUT_COLLIDED = "collided"
OUT_DEAD = "dead"

COLLISION_EXEMPT = frozenset({BEPASSIVE})


class Frame:
    __slots__ = (
        "fid",
        "sender",
        "cls",
        "msg",
        "bits",
        "dur",
        "addressee",
        "start",
        "end",
        "tx_cost",
        "rx_cost",
        "receivers",
        "suppressed",
    )

    def __init__(self, fid, sender, cls, msg, bits, dur, addressee, tx_cost, rx_cost):
        self.fid = fid
        self.sender = sender
        self.cls = cls
        self.msg = msg
        self.bits = bits
        self.dur = dur
        self.addressee = addressee
        self.start = 0.0
        self.end = 0.0
        self.tx_cost = tx_cost
        self.rx_cost = rx_cost
        self.receivers = ()
        self.suppressed = False


@dataclass
class PathActivation:
    session: int
    path_id: int
    instance: int
    hops: int
    t_activated: float
    t_first_forward: float | None = None
    t_established: float | None = None
    t_retired: float | None = None


@dataclass
class FloodRecord:
    session: int
    seq: int
    is_repair: bool
    broken_path_id: int | None
    t_issued: float


@dataclass
class SimConfig:
    """Engine knobs for one replication (scenario excerpt)."""

    scheme: str = nd.MR2
    strategy: str = "round_robin_split"
    packet_rate: float = 10.0
    payload_bits: int = 1024
    session_duration: float = 15.0
    session_stagger: float = 1.0
    collect_timeout: float = 2.0
    csma_jitter: float = 0.005
    sizes: MessageSizes = field(default_factory=MessageSizes)
    energy: EnergyParams = field(default_factory=EnergyParams)
    delivery_window: int = 20
    delivery_ratio_threshold: float = 0.8
    gap_factor: float = 3.0
    max_paths_mr2: int = 4
    max_paths_hc: int = 0  # 0 means unbounded
    rerr_energy_frac: float = 0.05
    flood_settle_margin: float = 2.0
    run_tail: float = 2.0
    record_frames: bool = False
    # a suppression notice airs this long after the forward that earned it,
    # so the first packet clears the whole chain (marking every relay busy,
    # hence exempt) before any notice can reach a downstream relay
    bepassive_delay: float = 0.15
    # after a discovery settles with data, the next flood waits this long so
    # the new path's suppression notices land before route formation resumes
    flood_grace: float = 0.6
    # application-layer dither on each packet's generation instant; keeps
    # equal-rate flows from phase-locking their airtime hop after hop
    send_jitter: float = 0.02


class Simulation:
    """One replication of one scheme on a fixed topology and source draw."""

    def __init__(
        self,
        topology: Topology,
        sources: list[int],
        rng: np.random.Generator,
        config: SimConfig,
    ):
        self.topo = topology
        self.cfg = config
        self.rng = rng
        self.scheme = config.scheme
        n = topology.node_count
        self.n = n
        self.sink = topology.sink_id
        self.sources = list(sources)

        indptr, indices = topology.neighbor_arrays()
        self.nbrs = [
            [int(v) for v in indices[indptr[k]:indptr[k + 1]]] for k in range(n)
        ]

        self.ctx = [nd.NodeContext(k) for k in range(n)]
        self.ctx[self.sink].role = nd.ROLE_SINK
        for s in self.sources:
            self.ctx[s].role = nd.ROLE_SOURCE
            self.ctx[s].session_id = s

        en = config.energy
        self.ledger = EnergyLedger(n, en)
        self.rx_power = en.rx_power
        self.sleep_power = en.sleep_power
        self.rerr_threshold = config.rerr_energy_frac * en.initial_energy
        self.dead = [False] * n
        self.last_settle = [0.0] * n
        self.busy_until = [0.0] * n
        self.busy_accum = [0.0] * n
        self.busy_snap = [0.0] * n

        sz = config.sizes
        self._cls_params = {}
        for cls in (REQUEST, BEPASSIVE, RERR):
            bits = sz.bits_for(cls)
            self._cls_params[cls] = (
                bits,
                bits / en.bitrate,
                energy_tx(bits, topology.radio_range, en),
                energy_rx(bits, en),
            )
        dbits = sz.bits_for(DATA, config.payload_bits)
        self._cls_params[DATA] = (
            dbits,
            dbits / en.bitrate,
            energy_tx(dbits, topology.radio_range, en),
            energy_rx(dbits, en),
        )
        self.max_dur = max(p[1] for p in self._cls_params.values())

        # medium state
        self.audible = [[] for _ in range(n)]
        self.aud_head = [0] * n
        self.txq = [deque() for _ in range(n)]
        self.tx_busy = [False] * n

        # event queue
        self.heap = []
        self._tie = 0
        self.now = 0.0
        self._fid = 0

        # sink-side orchestration: discovery floods are serialized globally,
        # one outstanding discovery at a time across sessions
        max_paths = config.max_paths_mr2 if self.scheme == nd.MR2 else config.max_paths_hc
        if self.scheme == nd.SINGLE:
            max_paths = 1
        if max_paths <= 0:
            max_paths = n
        self.monitors = {
            s: nd.SinkSessionMonitor(
                session_id=s,
                expected_interval=1.0 / config.packet_rate,
                window=config.delivery_window,
                ratio_threshold=config.delivery_ratio_threshold,
                gap_factor=config.gap_factor,
                max_paths=max_paths,
            )
            for s in self.sources
        }
        self.flood_queue = deque()
        self.pending_flood = None  # (session, seq, is_repair)
        self.flood_outstanding = {s: False for s in self.sources}
        self.next_seq = {s: 1 for s in self.sources}
        self.monitor_until = {}
        self.data_start = {}
        self.gen_end = {}

        # records
        self.sent = 0
        self.delivered = 0
        self.sent_by_source = {s: 0 for s in self.sources}
        self.delivered_by_source = {s: 0 for s in self.sources}
        self.sent_by_path = {}
        self.delivered_by_path = {}
        self.delivered_keys = set()
        self.delay_samples = []
        self.deliveries = []
        self.delivered_traces = []
        self.activations = []
        self.current_instance = {}
        self.inst_forwarders = {}
        self.floods = []
        self.discovery_failures = 0
        self.m_counts = {}
        self.route_drops = 0
        self.suppressed_frames = 0
        self.collisions = {}
        self.frames_tx = {}
        self.bepassive_tx = 0
        self.rerr_tx = 0
        self.frames = [] if config.record_frames else None
        self.receptions = [] if config.record_frames else None
        self.t_final = 0.0

    # -- energy settlement ---------------------------------------------------

    def _busy_add(self, node, start, end):
        bu = self.busy_until[node]
        lo = start if start > bu else bu
        if end > lo:
            self.busy_accum[node] += end - lo
            self.busy_until[node] = end

    def _settle(self, node, now):
        prev = self.last_settle[node]
        if now <= prev:
            return
        self.last_settle[node] = now
        if self.dead[node]:
            return
        span = now - prev
        if self.ctx[node].mode == nd.PASSIVE:
            self.ledger.charge_sleep(node, span * self.sleep_power)
        else:
            bu = self.busy_until[node]
            eff = self.busy_accum[node] - (bu - now if bu > now else 0.0)
            busy_in_span = eff - self.busy_snap[node]
            self.busy_snap[node] = eff
            idle = span - busy_in_span
            if idle > 0.0:
                self.ledger.charge_idle(node, idle * self.rx_power)
        if self.ledger.remaining(node) <= 0.0:
            self.dead[node] = True

    # -- scheduling -----------------------------------------------------------

    def _push(self, t, kind, payload):
        self._tie += 1
        heapq.heappush(self.heap, (t, self._tie, kind, payload))

    def _timer(self, t, ttype, a=0, b=0, c=0.0):
        self._push(t, EV_TIMER, (ttype, a, b, c))

    def enqueue_frame(self, sender, cls, msg, addressee, now):
        bits, dur, txc, rxc = self._cls_params[cls]
        self._fid += 1
        frame = Frame(self._fid, sender, cls, msg, bits, dur, addressee, txc, rxc)
        self.txq[sender].append(frame)
        if not self.tx_busy[sender]:
            self._start_next_tx(sender, now)
        return frame

    def _start_next_tx(self, sender, now):
        q = self.txq[sender]
        if not q:
            self.tx_busy[sender] = False
            return
        frame = q.popleft()
        start = now + self.rng.random() * self.cfg.csma_jitter
        frame.start = start
        frame.end = start + frame.dur
        self.tx_busy[sender] = True
        self._push(start, EV_TXSTART, frame)

    # -- medium ---------------------------------------------------------------

    def _on_txstart(self, frame):
        t = self.now
        s = frame.sender
        self._settle(s, t)
        if self.dead[s] or self.ledger.remaining(s) <= frame.tx_cost:
            frame.suppressed = True
            self.suppressed_frames += 1
            if self.frames is not None:
                self.frames.append(frame)
            self._start_next_tx(s, t)
            return
        self.ledger.charge_tx(s, frame.tx_cost, frame.cls)
        self.frames_tx[frame.cls] = self.frames_tx.get(frame.cls, 0) + 1
        if frame.cls == BEPASSIVE:
            self.bepassive_tx += 1
        elif frame.cls == RERR:
            self.rerr_tx += 1
        self._busy_add(s, frame.start, frame.end)
        self.audible[s].append((frame.start, frame.end, frame.fid))
        recv = []
        ctx = self.ctx
        dead = self.dead
        for r in self.nbrs[s]:
            if dead[r] or ctx[r].mode != nd.ACTIVE:
                continue
            self.audible[r].append((frame.start, frame.end, frame.fid))
            self._busy_add(r, frame.start, frame.end)
            recv.append(r)
        frame.receivers = recv
        if self.frames is not None:
            self.frames.append(frame)
        self._push(frame.end, EV_TXEND, frame)

    def _overlapped(self, r, frame):
        lst = self.audible[r]
        head = self.aud_head[r]
        fid = frame.fid
        f_start = frame.start
        f_end = frame.end
        cutoff = f_start - self.max_dur
        i = len(lst) - 1
        hit = False
        while i >= head:
            s2, e2, f2 = lst[i]
            if s2 <= cutoff:
                break
            if f2 != fid and e2 > f_start and s2 < f_end:
                hit = True
                break
            i -= 1
        # prune intervals that can no longer overlap anything unresolved
        t_cut = self.now - self.max_dur
        while head < len(lst) and lst[head][1] <= t_cut:
            head += 1
        if head > 512:
            del lst[:head]
            head = 0
        self.aud_head[r] = head
        return hit

    def _on_txend(self, frame):
        t = self.now
        self._start_next_tx(frame.sender, t)
        exempt = frame.cls in COLLISION_EXEMPT
        record = self.receptions is not None
        for r in frame.receivers:
            self._settle(r, t)
            if self.dead[r]:
                if record:
                    self.receptions.append((frame.fid, r, OUT_DEAD))
                continue
            got = self.ledger.charge_rx(r, frame.rx_cost, frame.cls)
            if got < frame.rx_cost:
                self.dead[r] = True
                if record:
                    self.receptions.append((frame.fid, r, OUT_DEAD))
                continue
            if self.ledger.remaining(r) <= 0.0:
                self.dead[r] = True
            if exempt:
                ok = True
            else:
                ok = not self._overlapped(r, frame)
            if record:
                self.receptions.append(
                    (frame.fid, r, OUT_DECODED if ok else OUT_COLLIDED)
                )
            if not ok:
                self.collisions[frame.cls] = self.collisions.get(frame.cls, 0) + 1
                continue
            if frame.addressee != BROADCAST and r != frame.addressee:
                continue  # promiscuous decode, no protocol action
            self._dispatch(r, frame)

    # -- protocol dispatch ------------------------------------------------------

    def _dispatch(self, r, frame):
        cls = frame.cls
        if cls == DATA:
            self._on_data(r, frame)
        elif cls == REQUEST:
            actions = nd.on_request(self.ctx[r], frame.msg, self.scheme, self.sink)
            for act in actions:
                if act[0] == nd.A_REBROADCAST:
                    self.enqueue_frame(r, REQUEST, act[1], BROADCAST, self.now)
                elif act[0] == nd.A_ARM_COLLECT:
                    self._timer(
                        self.now + self.cfg.collect_timeout, TT_COLLECT, act[1], act[2]
                    )
        elif cls == BEPASSIVE:
            nd.on_be_passive(self.ctx[r], frame.msg)
        elif cls == RERR:
            if r == self.sink:
                self._sink_on_rerr(frame.msg)
            else:
                for act in nd.on_route_error(self.ctx[r], frame.msg):
                    self.enqueue_frame(r, RERR, act[1], act[2], self.now)

    def _on_data(self, r, frame):
        pkt = frame.msg
        if r == self.sink:
            self._sink_on_data(pkt)
            return
        ctx = self.ctx[r]
        low = self.ledger.remaining(r) < self.rerr_threshold
        actions = nd.on_data(ctx, pkt, frame.sender, self.scheme, low)
        if not actions:
            self.route_drops += 1
            return
        session = pkt.source_id
        for act in actions:
            tag = act[0]
            if tag == nd.A_FORWARD:
                pkt.trace.append(r)
                self.m_counts[r] = self.m_counts.get(r, 0) + 1
                key = (session, pkt.path_id)
                inst = self.current_instance.get(key, 0)
                fkey = (session, pkt.path_id, inst)
                fwd = self.inst_forwarders.get(fkey)
                if fwd is None:
                    fwd = self.inst_forwarders[fkey] = set()
                    act_rec = self._find_activation(session, pkt.path_id, inst)
                    if act_rec is not None and act_rec.t_first_forward is None:
                        act_rec.t_first_forward = self.now
                fwd.add(r)
                self.enqueue_frame(r, DATA, pkt, act[2], self.now)
            elif tag == nd.A_BEPASSIVE:
                self.enqueue_frame(r, BEPASSIVE, act[1], BROADCAST, self.now)
            elif tag == nd.A_RERR:
                self.enqueue_frame(r, RERR, act[1], act[2], self.now)

    def _find_activation(self, session, path_id, instance):
        for rec in reversed(self.activations):
            if (
                rec.session == session
                and rec.path_id == path_id
                and rec.instance == instance
            ):
                return rec
        return None

    # -- sink side ----------------------------------------------------------------

    def _sink_on_data(self, pkt):
        t = self.now
        session = pkt.source_id
        mon = self.monitors.get(session)
        if mon is None:
            return
        fresh = mon.observe_copy(pkt.path_id, t)
        self._timer(
            t + mon.broken_timeout(), TT_STALE, session, pkt.path_id, t
        )
        key = (session, pkt.seq)
        if key not in self.delivered_keys:
            self.delivered_keys.add(key)
            self.delivered += 1
            self.delivered_by_source[session] += 1
            pk = (session, pkt.path_id)
            self.delivered_by_path[pk] = self.delivered_by_path.get(pk, 0) + 1
            delay = t - pkt.gen_time
            self.delay_samples.append(delay)
            self.deliveries.append((t, delay, session, pkt.path_id))
            self.delivered_traces.append((session, pkt.seq, tuple(pkt.trace)))
            mon.observe_packet(pkt.seq, t)
            inst = self.current_instance.get(pk, 0)
            rec = self._find_activation(session, pkt.path_id, inst)
            if rec is not None and rec.t_established is None:
                rec.t_established = t
        if fresh and self.pending_flood is not None and self.pending_flood[0] == session:
            self.pending_flood = None
            self.flood_outstanding[session] = False
            self._issue_next_flood()
        until = self.monitor_until.get(session)
        if until is not None and t > until:
            return
        if (
            not self.flood_outstanding[session]
            and mon.wants_additional(self.scheme)
        ):
            self._enqueue_flood(session, False, None)

    def _sink_on_rerr(self, rerr: RouteError):
        t = self.now
        for session, mon in self.monitors.items():
            if rerr.path_id in mon.active_seen:
                self._declare_broken(session, rerr.path_id)

    def _declare_broken(self, session, path_id):
        t = self.now
        mon = self.monitors[session]
        if path_id not in mon.active_seen:
            return
        mon.active_seen.discard(path_id)
        inst = self.current_instance.get((session, path_id), 0)
        rec = self._find_activation(session, path_id, inst)
        if rec is not None and rec.t_retired is None:
            rec.t_retired = t
        until = self.monitor_until.get(session)
        if until is not None and t > until:
            return
        if not self.flood_outstanding[session]:
            self._enqueue_flood(session, True, path_id)

    def _enqueue_flood(self, session, is_repair, broken):
        self.flood_outstanding[session] = True
        self.flood_queue.append((session, is_repair, broken))
        self._issue_next_flood()

    def _issue_next_flood(self):
        while self.pending_flood is None and self.flood_queue:
            session, is_repair, broken = self.flood_queue.popleft()
            until = self.monitor_until.get(session)
            if until is not None and self.now > until:
                self.flood_outstanding[session] = False
                continue
            seq = self.next_seq[session]
            self.next_seq[session] = seq + 1
            mon = self.monitors[session]
            mon.seq_counter = seq
            if not is_repair and seq > 1:
                mon.non_repair_issued += 1
            req = RouteRequest(
                session_id=session,
                seq=seq,
                path_id=self.sink,
                last_node=self.sink,
                metric=0,
                is_repair=is_repair,
                broken_path_id=broken,
            )
            self.floods.append(FloodRecord(session, seq, is_repair, broken, self.now))
            self.pending_flood = (session, seq, is_repair)
            self.enqueue_frame(self.sink, REQUEST, req, BROADCAST, self.now)
            self._timer(
                self.now + self.cfg.collect_timeout + self.cfg.flood_settle_margin,
                TT_FLOOD_TIMEOUT,
                session,
                seq,
            )

    def _settle_flood_failure(self, session, seq):
        pf = self.pending_flood
        if pf is None or pf[0] != session or pf[1] != seq:
            return
        is_repair = pf[2]
        self.pending_flood = None
        self.flood_outstanding[session] = False
        if not is_repair and seq > 1:
            self.monitors[session].additional_stalled = True
        self._issue_next_flood()

    # -- timers and app layer -------------------------------------------------------

    def _on_timer(self, payload):
        ttype, a, b, c = payload
        t = self.now
        if ttype == TT_SESSION_START:
            self._enqueue_flood(a, False, None)
        elif ttype == TT_COLLECT:
            session, seq = a, b
            ctx = self.ctx[session]
            for act in nd.source_on_collect_timeout(ctx, seq, self.scheme):
                if act[0] == nd.A_START_DATA:
                    self._on_paths_activated(session, act[2])
                elif act[0] == nd.A_DISCOVERY_FAILED:
                    self.discovery_failures += 1
                    self._settle_flood_failure(session, seq)
        elif ttype == TT_STALE:
            session, path_id, stamp = a, b, c
            mon = self.monitors[session]
            if (
                mon.last_data.get(path_id) == stamp
                and path_id in mon.active_seen
            ):
                until = self.monitor_until.get(session)
                if until is None or t <= until:
                    self._declare_broken(session, path_id)
        elif ttype == TT_FLOOD_TIMEOUT:
            self._settle_flood_failure(a, b)

    def _on_paths_activated(self, session, activated):
        t = self.now
        for path_id, hops in activated:
            key = (session, path_id)
            inst = self.current_instance.get(key)
            inst = 0 if inst is None else inst + 1
            self.current_instance[key] = inst
            self.activations.append(
                PathActivation(session, path_id, inst, hops, t)
            )
        if session not in self.data_start:
            self.data_start[session] = t
            self.gen_end[session] = t + self.cfg.session_duration
            self.monitor_until[session] = self.gen_end[session]
            self._push(t, EV_APPSEND, session)

    def _on_appsend(self, session):
        t = self.now
        if t >= self.gen_end[session] - 1e-12:
            return
        self._push(t + 1.0 / self.cfg.packet_rate, EV_APPSEND, session)
        ctx = self.ctx[session]
        if not ctx.active_paths:
            return  # flow paused until a path is available again
        seq = ctx.data_seq
        ctx.data_seq += 1
        self.sent += 1
        self.sent_by_source[session] += 1
        paths = nd.partition_traffic(self.cfg.strategy, ctx.active_paths, seq)
        for path_id in paths:
            entry = ctx.table.get(path_id)
            if entry is None:
                continue
            pk = (session, path_id)
            self.sent_by_path[pk] = self.sent_by_path.get(pk, 0) + 1
            pkt = DataPacket(
                source_id=session,
                seq=seq,
                path_id=path_id,
                payload_bits=self.cfg.payload_bits,
                gen_time=t,
                trace=[],
            )
            self.enqueue_frame(session, DATA, pkt, entry.next_node, t)

    # -- main loop ----------------------------------------------------------------

    def schedule_sessions(self):
        """Arm one session per source, staggered by the configured offset."""
        for i, s in enumerate(self.sources):
            self._timer(i * self.cfg.session_stagger, TT_SESSION_START, s)

    def run_until(self, t_end: float | None = None) -> float:
        """Process events in order until ``t_end`` (or quiescence).

        Returns the time of the last processed event.  Final sleep/idle
        integration is the caller's job via ``finalize``.
        """
        heap = self.heap
        last = self.now
        while heap:
            t, _tie, kind, payload = heap[0]
            if t_end is not None and t > t_end:
                break
            heapq.heappop(heap)
            assert t >= self.now - 1e-12, "event scheduled in the past"
            self.now = t
            last = t
            if kind == EV_TXEND:
                self._on_txend(payload)
            elif kind == EV_TXSTART:
                self._on_txstart(payload)
            elif kind == EV_TIMER:
                self._on_timer(payload)
            else:
                self._on_appsend(payload)
        return last

    def finalize(self):
        """Settle idle/sleep drain for every node up to the run horizon.

        The horizon is the end of the last data window plus a fixed tail,
        so matched runs integrate standby drain over comparable spans;
        post-horizon bookkeeping events carry no charges.
        """
        if self.monitor_until:
            horizon = max(self.monitor_until.values()) + self.cfg.run_tail
        else:
            horizon = self.now + self.cfg.run_tail
        self.t_final = horizon
        for k in range(self.n):
            self._settle(k, horizon)

    def run(self) -> None:
        self.schedule_sessions()
        self.run_until(None)
        self.finalize()

    # -- export ---------------------------------------------------------------------

    def export_event_log(self) -> str:
        """Line format: time kind sender receiver msgClass outcome."""
        if self.frames is None:
            raise ValueError("run was not recorded; set record_frames")
        return event_log_text(self.frames, self.receptions)


def event_log_text(frames, receptions) -> str:
    """Render a recorded run as `time kind sender receiver msgClass outcome`
    lines, one per transmission and one per charged reception."""
    by_fid = {f.fid: f for f in frames}
    events = []
    for f in frames:
        outcome = "suppressed" if f.suppressed else "ok"
        line = "%.9f tx %d -1 %s %s" % (f.start, f.sender, f.cls, outcome)
        events.append((f.start, 0, f.fid, line))
    for fid, r, outcome in receptions:
        f = by_fid[fid]
        line = "%.9f rx %d %d %s %s" % (f.end, f.sender, r, f.cls, outcome)
        events.append((f.end, 1, fid, line))
    events.sort(key=lambda e: (e[0], e[1], e[2]))
    return "\n".join(e[3] for e in events) + "\n"
