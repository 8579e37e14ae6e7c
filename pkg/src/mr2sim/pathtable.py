"""Per-node path table and the request-processing rules.

Each entry records one known route to the sink.  Entries are keyed by
path id, which is the sink's first-hop node that stamped the discovery
request.  Table state persists across discovery rounds, but the
ignore/replace comparison is scoped to one round (session, seq): the
first request of a new round overwrites a stale entry unconditionally,
so a re-flood can rebuild routes through the currently active nodes.
Entries whose path is in use are frozen and never rewritten.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotFoundError
from .messages import RouteRequest


@dataclass
class PathTableEntry:
    path_id: int
    next_node: int
    metric: int
    in_use: bool = False
    # discovery round that wrote the entry; bookkeeping for round scoping
    session_id: int = -1
    seq: int = 0


class PathTable:
    """Mapping path_id -> PathTableEntry with O(1) in-use count."""

    __slots__ = ("entries", "in_use_count")

    def __init__(self):
        self.entries: dict[int, PathTableEntry] = {}
        self.in_use_count = 0

    def __len__(self):
        return len(self.entries)

    def __contains__(self, path_id):
        return path_id in self.entries

    def get(self, path_id):
        return self.entries.get(path_id)


def apply_request(
    table: PathTable, request: RouteRequest, self_id: int, from_sink: bool
) -> tuple[bool, PathTableEntry | None]:
    """Apply one received discovery request to the table.

    Returns ``(updated, entry)``.  ``updated`` is the rebroadcast signal:
    a request propagates only when it changed the table.

    Rules: an unknown path id creates an entry with the metric
    incremented by one; the receiving node stamps its own id as the path
    id when the request came straight from the sink.  A known path id is
    rewritten when the request opens a new discovery round, or improves
    the stored metric strictly within the same round.  In-use entries
    are never rewritten.
    """
    path_id = self_id if from_sink else request.path_id
    new_metric = request.metric + 1
    entry = table.entries.get(path_id)
    if entry is None:
        entry = PathTableEntry(
            path_id=path_id,
            next_node=request.last_node,
            metric=new_metric,
            in_use=False,
            session_id=request.session_id,
            seq=request.seq,
        )
        table.entries[path_id] = entry
        return True, entry
    if entry.in_use:
        return False, None
    same_round = entry.session_id == request.session_id and entry.seq == request.seq
    if same_round and new_metric >= entry.metric:
        return False, None
    entry.next_node = request.last_node
    entry.metric = new_metric
    entry.session_id = request.session_id
    entry.seq = request.seq
    return True, entry


def select_best_path(
    table: PathTable,
    exclude_in_use: bool = False,
    among: set[int] | None = None,
) -> int | None:
    """Path id with the minimal metric; ties break to the smallest id.

    ``among`` optionally restricts the candidates (e.g. to the ids
    reported in the current discovery round).  Returns None when no
    entry is eligible.
    """
    best = None
    for path_id, entry in table.entries.items():
        if exclude_in_use and entry.in_use:
            continue
        if among is not None and path_id not in among:
            continue
        if best is None or (entry.metric, path_id) < (best.metric, best.path_id):
            best = entry
    return None if best is None else best.path_id


def mark_in_use(table: PathTable, path_id: int) -> PathTableEntry:
    """Set the in-use flag on one entry; idempotent."""
    entry = table.entries.get(path_id)
    if entry is None:
        raise NotFoundError(f"path {path_id} not in table")
    if not entry.in_use:
        entry.in_use = True
        table.in_use_count += 1
    return entry


def clear_in_use(table: PathTable, path_id: int) -> None:
    entry = table.entries.get(path_id)
    if entry is not None and entry.in_use:
        entry.in_use = False
        table.in_use_count -= 1


def remove_path(table: PathTable, path_id: int) -> None:
    """Drop an entry; removing an absent id is a no-op."""
    entry = table.entries.pop(path_id, None)
    if entry is not None and entry.in_use:
        table.in_use_count -= 1
