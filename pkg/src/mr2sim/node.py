"""Per-node protocol behavior for the three routing schemes.

Handlers mutate the node context and return action tuples that the
simulation kernel executes (queue a frame, arm a timer, record an
event).  Keeping the handlers free of kernel details makes the protocol
rules unit-testable in isolation.

Scheme contract:
  mr2    incremental multipath with passive suppression.  Passive nodes
         and nodes already relaying an in-use path ignore discovery
         requests, forwarding nodes notify their neighborhood once per
         session, and the notified nodes go passive (radio asleep).
  hc     multipath without interference awareness: same discovery
         machinery, no suppression of any kind, and the source activates
         every distinct path a discovery round reports.
  single one best-metric path per session; no additional discoveries,
         repairs only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidParameterError
from .messages import BePassive, DataPacket, RouteError, RouteRequest
from .pathtable import (
    PathTable,
    apply_request,
    clear_in_use,
    mark_in_use,
    remove_path,
    select_best_path,
)

MR2 = "mr2"
HC = "hc"
SINGLE = "single"
SCHEMES = (MR2, HC, SINGLE)

ROLE_SENSOR = 0
ROLE_SOURCE = 1
ROLE_SINK = 2

ACTIVE = 0
PASSIVE = 1

# action tags returned by handlers
A_REBROADCAST = "rebroadcast"
A_FORWARD = "forward"
A_BEPASSIVE = "bepassive"
A_DELIVER = "deliver"
A_ARM_COLLECT = "arm_collect"
A_START_DATA = "start_data"
A_DISCOVERY_FAILED = "discovery_failed"
A_RERR = "rerr"
A_WENT_PASSIVE = "went_passive"
A_WOKE = "woke"


@dataclass
class RoundState:
    """Path ids a source heard during one discovery round."""

    reported: set[int] = field(default_factory=set)
    timer_armed: bool = False


class NodeContext:
    __slots__ = (
        "id",
        "role",
        "mode",
        "table",
        "session_id",
        "bepassive_sent",
        "deferred_passive",
        "rerr_sent",
        "passive_since",
        "passive_session",
        "rounds",
        "active_paths",
        "in_use_sessions",
        "data_seq",
    )

    def __init__(self, node_id: int, role: int = ROLE_SENSOR, session_id: int | None = None):
        self.id = node_id
        self.role = role
        self.mode = ACTIVE
        self.table = PathTable()
        self.session_id = session_id  # sources only: the session they feed
        self.bepassive_sent: set[int] = set()
        self.deferred_passive: set[int] = set()
        self.rerr_sent: set[int] = set()
        self.passive_since: float | None = None
        self.passive_session: int | None = None
        self.rounds: dict[int, RoundState] = {}
        self.active_paths: list[int] = []
        self.in_use_sessions: dict[int, set[int]] = {}
        self.data_seq = 0

    def is_busy_relay(self) -> bool:
        return self.table.in_use_count > 0


def _wipe_broken(ctx: NodeContext, request: RouteRequest) -> None:
    # a repair flood erases the broken path's stale entries as it travels,
    # so the same path id can be rebuilt through currently usable nodes
    broken = request.broken_path_id
    if broken is None:
        return
    entry = ctx.table.get(broken)
    if entry is not None:
        was_in_use = entry.in_use
        remove_path(ctx.table, broken)
        ctx.in_use_sessions.pop(broken, None)
        if broken in ctx.active_paths:
            ctx.active_paths.remove(broken)
        if was_in_use and ctx.table.in_use_count == 0 and ctx.deferred_passive:
            # a neighborhood suppression arrived while this node was busy
            # relaying; honor it now that the node is free
            if ctx.role == ROLE_SENSOR:
                ctx.mode = PASSIVE
                ctx.passive_session = min(ctx.deferred_passive)


def on_request(
    ctx: NodeContext, request: RouteRequest, scheme: str, sink_id: int
) -> list[tuple]:
    """Handle one decoded discovery request.

    Passive nodes do not react.  Under mr2, nodes already relaying an
    in-use path also stay out of new path formation, and designated
    endpoints (sources, sink) never relay floods.  An active sensor
    applies the request and rebroadcasts only when the table changed.
    A source records the reported path id for the round and arms the
    route-collection timer on the round's first request.
    """
    if ctx.role == ROLE_SINK:
        return []
    if ctx.mode == PASSIVE:
        return []
    if ctx.role == ROLE_SOURCE:
        if request.session_id != ctx.session_id:
            return []
        _wipe_broken(ctx, request)
        updated, entry = apply_request(
            ctx.table, request, ctx.id, from_sink=request.last_node == sink_id
        )
        rnd = ctx.rounds.get(request.seq)
        if rnd is None:
            rnd = ctx.rounds[request.seq] = RoundState()
        if entry is not None:
            rnd.reported.add(entry.path_id)
        elif request.path_id in ctx.table:
            rnd.reported.add(request.path_id)
        actions = []
        if not rnd.timer_armed:
            rnd.timer_armed = True
            actions.append((A_ARM_COLLECT, request.session_id, request.seq))
        return actions
    # plain sensor
    if request.is_repair:
        _wipe_broken(ctx, request)
        if ctx.mode == PASSIVE:
            return []
    if scheme == MR2 and ctx.is_busy_relay():
        return []
    updated, entry = apply_request(
        ctx.table, request, ctx.id, from_sink=request.last_node == sink_id
    )
    if not updated:
        return []
    relay = RouteRequest(
        session_id=request.session_id,
        seq=request.seq,
        path_id=entry.path_id,
        last_node=ctx.id,
        metric=entry.metric,
        is_repair=request.is_repair,
        broken_path_id=request.broken_path_id,
    )
    return [(A_REBROADCAST, relay)]


def source_on_collect_timeout(ctx: NodeContext, seq: int, scheme: str) -> list[tuple]:
    """Pick and activate path(s) once the round's routes are collected.

    mr2 and single activate the single best-metric candidate; hc
    activates every candidate the round reported.  Candidates exclude
    paths already in use.  An empty candidate set is a discovery
    failure, recorded in run metadata.
    """
    rnd = ctx.rounds.get(seq)
    reported = rnd.reported if rnd is not None else set()
    activated = []
    while True:
        best = select_best_path(ctx.table, exclude_in_use=True, among=reported)
        if best is None:
            break
        entry = mark_in_use(ctx.table, best)
        ctx.active_paths.append(best)
        activated.append((best, entry.metric))
        if scheme != HC:
            break
    if not activated:
        return [(A_DISCOVERY_FAILED, ctx.session_id, seq)]
    return [(A_START_DATA, ctx.session_id, activated)]


def partition_traffic(strategy: str, active_paths: list[int], seq: int) -> list[int]:
    """Assign one data packet to path(s) per the traffic strategy."""
    if not active_paths:
        raise InvalidParameterError("no active paths")
    if strategy == "round_robin_split":
        return [active_paths[seq % len(active_paths)]]
    if strategy == "duplicate":
        return list(active_paths)
    raise InvalidParameterError(f"unknown strategy {strategy!r}")


def on_data(
    ctx: NodeContext,
    pkt: DataPacket,
    from_node: int,
    scheme: str,
    low_energy: bool,
) -> list[tuple]:
    """Relay a data packet one hop toward the sink.

    The first data packet a node forwards on a path sets the in-use
    flag; under mr2 it also triggers the once-per-session neighborhood
    suppression notice, exempting the node's predecessor and successor
    on the path.  ``low_energy`` reports whether the node's remaining
    energy is under the route-error threshold.
    """
    if ctx.role == ROLE_SINK:
        return [(A_DELIVER, pkt)]
    entry = ctx.table.get(pkt.path_id)
    if entry is None:
        return []  # routing inconsistency; kernel counts the drop
    mark_in_use(ctx.table, pkt.path_id)
    ctx.in_use_sessions.setdefault(pkt.path_id, set()).add(pkt.source_id)
    actions = [(A_FORWARD, pkt, entry.next_node)]
    session = pkt.source_id
    if scheme == MR2 and session not in ctx.bepassive_sent:
        ctx.bepassive_sent.add(session)
        notice = BePassive(
            sender_id=ctx.id,
            session_id=session,
            exempt_prev=from_node,
            exempt_next=entry.next_node,
        )
        actions.append((A_BEPASSIVE, notice))
    if low_energy and pkt.path_id not in ctx.rerr_sent:
        ctx.rerr_sent.add(pkt.path_id)
        actions.append((A_RERR, RouteError(ctx.id, pkt.path_id), entry.next_node))
    return actions


def on_be_passive(ctx: NodeContext, msg: BePassive) -> list[tuple]:
    """Demote to passive unless exempt.

    Exempt: the notice's named predecessor/successor, sources and the
    sink, and nodes currently relaying an in-use path.  A busy relay
    remembers the notice and honors it if it later stops relaying, so a
    freed node next to an active corridor sleeps instead of rejoining
    route formation.
    """
    if ctx.role != ROLE_SENSOR:
        return []
    if ctx.id == msg.exempt_prev or ctx.id == msg.exempt_next:
        return []
    if ctx.is_busy_relay():
        ctx.deferred_passive.add(msg.session_id)
        return []
    if ctx.mode == PASSIVE:
        return []
    ctx.mode = PASSIVE
    ctx.passive_session = msg.session_id
    return [(A_WENT_PASSIVE,)]


def on_route_error(ctx: NodeContext, rerr: RouteError) -> list[tuple]:
    """Relay a route error one hop toward the sink along its path."""
    entry = ctx.table.get(rerr.path_id)
    if entry is None:
        return []
    return [(A_FORWARD, rerr, entry.next_node)]


def reset_session(contexts, session_id: int) -> None:
    """Tear down one session's per-node marks.

    Nodes made passive by this session wake up, in-use flags held only
    for this session clear, and the once-per-session suppression latch
    drops.  Other sessions' state is untouched.
    """
    for ctx in contexts:
        if ctx.mode == PASSIVE and ctx.passive_session == session_id:
            ctx.deferred_passive.discard(session_id)
            if ctx.deferred_passive:
                ctx.passive_session = min(ctx.deferred_passive)
            else:
                ctx.mode = ACTIVE
                ctx.passive_session = None
                ctx.passive_since = None
        else:
            ctx.deferred_passive.discard(session_id)
        ctx.bepassive_sent.discard(session_id)
        for path_id in list(ctx.in_use_sessions):
            users = ctx.in_use_sessions[path_id]
            users.discard(session_id)
            if not users:
                del ctx.in_use_sessions[path_id]
                clear_in_use(ctx.table, path_id)
        if ctx.session_id == session_id:
            for path_id in list(ctx.active_paths):
                clear_in_use(ctx.table, path_id)
            ctx.active_paths.clear()


@dataclass
class SinkSessionMonitor:
    """Sink-side per-session delivery monitoring state."""

    session_id: int
    expected_interval: float  # nominal seconds between packets of the flow
    window: int  # delivery-ratio window, in packets
    ratio_threshold: float
    gap_factor: float
    max_paths: int  # cap on non-repair discovery rounds
    seq_counter: int = 1  # discovery rounds issued so far (latest rank)
    non_repair_issued: int = 1
    active_seen: set[int] = field(default_factory=set)
    last_data: dict[int, float] = field(default_factory=dict)
    recent_seqs: set[int] = field(default_factory=set)
    max_seq: int = -1
    last_arrival: float | None = None
    ema_gap: float | None = None
    additional_stalled: bool = False
    repair_eligible_at: dict[int, float] = field(default_factory=dict)

    def observe_copy(self, path_id: int, now: float) -> bool:
        """Per-copy bookkeeping; returns True if the path id is new."""
        fresh = path_id not in self.active_seen
        self.active_seen.add(path_id)
        self.last_data[path_id] = now
        return fresh

    def observe_packet(self, seq: int, now: float) -> None:
        """First-copy bookkeeping for the congestion signals."""
        if self.last_arrival is not None:
            gap = now - self.last_arrival
            if self.ema_gap is None:
                self.ema_gap = gap
            else:
                self.ema_gap += 0.125 * (gap - self.ema_gap)
        self.last_arrival = now
        if seq > self.max_seq:
            self.max_seq = seq
        self.recent_seqs.add(seq)
        if len(self.recent_seqs) > 4 * self.window:
            floor = self.max_seq - self.window
            self.recent_seqs = {s for s in self.recent_seqs if s > floor}

    def delivery_ratio(self) -> float | None:
        if self.max_seq + 1 < self.window:
            return None
        floor = self.max_seq - self.window
        got = sum(1 for s in self.recent_seqs if s > floor)
        return got / self.window

    def congested(self) -> bool:
        ratio = self.delivery_ratio()
        if ratio is not None and ratio < self.ratio_threshold:
            return True
        if self.ema_gap is not None and self.ema_gap > self.gap_factor * self.expected_interval:
            return True
        return False

    def wants_additional(self, scheme: str) -> bool:
        if scheme == SINGLE or self.additional_stalled:
            return False
        if self.non_repair_issued >= self.max_paths:
            return False
        # a new round is only worth issuing once the newest path proved out
        if len(self.active_seen) < self.non_repair_issued:
            return False
        return self.congested()

    def broken_timeout(self) -> float:
        paths = max(1, len(self.active_seen))
        return 10.0 * paths * self.expected_interval
