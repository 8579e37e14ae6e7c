"""Protocol message records and the frame size model.

Messages are in-simulator values; the size model only feeds airtime and
energy accounting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# frame classes (also used as energy attribution keys)
REQUEST = "request"
BEPASSIVE = "bepassive"
RERR = "rerr"
DATA = "data"

BROADCAST = -1


@dataclass
class RouteRequest:
    """Sink-originated discovery request, re-stamped hop by hop.

    ``seq`` is the rank of the path being built for the session.  The
    path id is the first node the request crossed after leaving the sink;
    until then it carries the sink's own address.  Repair requests carry
    the id of the path being replaced.
    """

    session_id: int
    seq: int
    path_id: int
    last_node: int
    metric: int
    is_repair: bool = False
    broken_path_id: int | None = None

    def __post_init__(self):
        if self.is_repair != (self.broken_path_id is not None):
            raise ValueError("broken_path_id must be present iff is_repair")
        if self.seq < 1:
            raise ValueError("seq must be >= 1")


@dataclass
class DataPacket:
    source_id: int
    seq: int
    path_id: int
    payload_bits: int
    gen_time: float = 0.0
    trace: list = field(default_factory=list)  # node ids crossed, sim plumbing


@dataclass
class BePassive:
    """One-per-session suppression notice from a forwarding node.

    The sender's predecessor and successor on the in-use path are exempt.
    """

    sender_id: int
    session_id: int
    exempt_prev: int
    exempt_next: int


@dataclass
class RouteError:
    """Emitted by a relay whose remaining energy fell below threshold."""

    sender_id: int
    path_id: int


@dataclass(frozen=True)
class MessageSizes:
    """Bit lengths per frame class; data frames add the payload."""

    request_bits: int = 240
    bepassive_bits: int = 96
    rerr_bits: int = 96
    data_header_bits: int = 96

    def bits_for(self, cls: str, payload_bits: int = 0) -> int:
        if cls == REQUEST:
            return self.request_bits
        if cls == BEPASSIVE:
            return self.bepassive_bits
        if cls == RERR:
            return self.rerr_bits
        if cls == DATA:
            return self.data_header_bits + payload_bits
        raise ValueError(f"unknown frame class {cls!r}")
