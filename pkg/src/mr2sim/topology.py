"""Randomized-grid sensor fields, radio ranges and neighbor graphs.

A deployment places ``grid_side**2`` sensor nodes, one uniformly at random
inside each cell of a square grid over the field, plus one extra sink node
pinned exactly at the upper-right corner ``(field_size, field_size)``.
Node ids are dense: grid cell ``(i, j)`` gets id ``i * grid_side + j`` and
the sink gets id ``grid_side**2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import InvalidParameterError, NotFoundError

SPARSE = "sparse"
DENSE = "dense"

_RANGE_NUMERATOR = {SPARSE: 1500.0, DENSE: 2000.0}


def radio_range(mode: str, grid_side: int) -> float:
    """Transmission range in meters for a deployment density mode.

    Sparse deployments use 1500/N and dense ones 2000/N, N = grid_side.
    """
    if grid_side < 1:
        raise InvalidParameterError("grid_side must be >= 1")
    try:
        return _RANGE_NUMERATOR[mode] / grid_side
    except KeyError:
        raise InvalidParameterError(f"unknown mode {mode!r}") from None


@dataclass
class Topology:
    """Immutable-by-convention deployment: positions, sink id, radio range.

    ``positions[k]`` is the (x, y) of node k.  The neighbor graph (unit
    disk, inclusive boundary) is built lazily once ``radio_range`` is set.
    """

    field_size: float
    grid_side: int
    positions: np.ndarray
    sink_id: int
    radio_range: float = 0.0
    _indptr: np.ndarray | None = field(default=None, repr=False)
    _indices: np.ndarray | None = field(default=None, repr=False)

    @property
    def node_count(self) -> int:
        return self.positions.shape[0]

    @property
    def grid_node_count(self) -> int:
        return self.grid_side * self.grid_side

    def with_radio_range(self, r: float) -> "Topology":
        if r <= 0:
            raise InvalidParameterError("radio_range must be > 0")
        return replace(self, radio_range=float(r), _indptr=None, _indices=None)

    def _ensure_graph(self):
        if self._indptr is None:
            if self.radio_range <= 0:
                raise InvalidParameterError("radio_range not set on topology")
            self._indptr, self._indices = _kernels.adjacency_csr(
                self.positions[:, 0], self.positions[:, 1], self.radio_range
            )
        return self._indptr, self._indices

    def neighbor_arrays(self):
        """CSR (indptr, indices) of the neighbor graph."""
        return self._ensure_graph()

    def neighbors(self, node_id: int) -> set[int]:
        """Ids of all nodes within radio range of ``node_id`` (inclusive)."""
        if not 0 <= node_id < self.node_count:
            raise NotFoundError(f"node {node_id} not in topology")
        indptr, indices = self._ensure_graph()
        return set(int(v) for v in indices[indptr[node_id]:indptr[node_id + 1]])

    def mean_degree(self) -> float:
        """Average neighbor count over all nodes, sink included."""
        if self.node_count == 0:
            raise InvalidParameterError("empty topology")
        indptr, _ = self._ensure_graph()
        return float(np.diff(indptr).mean())

    def is_sink_reachable(self, source_id: int) -> bool:
        """True iff a multi-hop path exists from ``source_id`` to the sink."""
        if not 0 <= source_id < self.node_count:
            raise NotFoundError(f"node {source_id} not in topology")
        if source_id == self.sink_id:
            return True
        indptr, indices = self._ensure_graph()
        visited = _kernels.bfs_reachable(indptr, indices, self.sink_id, self.node_count)
        return bool(visited[source_id])

    def reachable_from_sink(self) -> np.ndarray:
        indptr, indices = self._ensure_graph()
        return _kernels.bfs_reachable(indptr, indices, self.sink_id, self.node_count)

    # -- text serialization (golden-file format) ---------------------------

    def serialize(self) -> str:
        """Line-oriented text form: one header line, then ``id x y`` lines."""
        lines = [
            "%.17g %d %d %.17g"
            % (self.field_size, self.grid_side, self.sink_id, self.radio_range)
        ]
        for k in range(self.node_count):
            lines.append(
                "%d %.17g %.17g" % (k, self.positions[k, 0], self.positions[k, 1])
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Topology":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        fs, gs, sink, rng = lines[0].split()
        rows = [ln.split() for ln in lines[1:]]
        positions = np.zeros((len(rows), 2), dtype=np.float64)
        for ident, x, y in rows:
            positions[int(ident)] = (float(x), float(y))
        return cls(
            field_size=float(fs),
            grid_side=int(gs),
            positions=positions,
            sink_id=int(sink),
            radio_range=float(rng),
        )


def generate_randomized_grid(
    grid_side: int,
    field_size: float,
    seed,
    radio_range: float = 0.0,
) -> Topology:
    """Deploy ``grid_side**2`` sensors, one per grid cell, plus a corner sink.

    Cell ``(i, j)`` spans ``[i*c, (i+1)*c) x [j*c, (j+1)*c)`` with
    ``c = field_size / grid_side`` and its node is placed uniformly at
    random inside it.  The sink is an extra node pinned at
    ``(field_size, field_size)``.  Deterministic for a fixed seed.
    """
    if grid_side < 1:
        raise InvalidParameterError("grid_side must be >= 1")
    if field_size <= 0:
        raise InvalidParameterError("field_size must be > 0")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = grid_side * grid_side
    cell = field_size / grid_side
    jitter = rng.random((n, 2))
    ii, jj = np.divmod(np.arange(n), grid_side)
    positions = np.empty((n + 1, 2), dtype=np.float64)
    positions[:n, 0] = (ii + jitter[:, 0]) * cell
    positions[:n, 1] = (jj + jitter[:, 1]) * cell
    positions[n] = (field_size, field_size)
    return Topology(
        field_size=float(field_size),
        grid_side=int(grid_side),
        positions=positions,
        sink_id=n,
        radio_range=float(radio_range),
    )


def select_sources(topology: Topology, count: int, rng: np.random.Generator) -> list[int]:
    """Draw ``count`` distinct source nodes uniformly from the non-sink nodes."""
    if count < 1 or count > topology.grid_node_count:
        raise InvalidParameterError("source count out of range")
    picks = rng.choice(topology.grid_node_count, size=count, replace=False)
    return [int(p) for p in picks]
