"""Array kernels behind the geometry and audit code paths.

Each kernel has a numba-compiled version and a pure-numpy fallback.  The
fallback is selected either by setting the environment variable
``MR2SIM_DISABLE_NUMBA=1`` before import, or automatically when numba is
not importable.  ``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("MR2SIM_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag not in ("", "0", "false", "no")

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled by MR2SIM_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# unit-disk adjacency (CSR)

def _adjacency_csr_numpy(xs, ys, radius):
    n = xs.shape[0]
    dx = xs[:, None] - xs[None, :]
    dy = ys[:, None] - ys[None, :]
    within = dx * dx + dy * dy <= radius * radius
    np.fill_diagonal(within, False)
    rows, cols = np.nonzero(within)
    counts = within.sum(axis=1)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, cols.astype(np.int32)


if HAVE_NUMBA:

    @njit(cache=True)
    def _adjacency_csr_numba(xs, ys, radius):  # pragma: no cover - numba path
        n = xs.shape[0]
        r2 = radius * radius
        counts = np.zeros(n, dtype=np.int64)
        for i in range(n):
            c = 0
            for j in range(n):
                if i == j:
                    continue
                dx = xs[i] - xs[j]
                dy = ys[i] - ys[j]
                if dx * dx + dy * dy <= r2:
                    c += 1
            counts[i] = c
        indptr = np.zeros(n + 1, dtype=np.int64)
        for i in range(n):
            indptr[i + 1] = indptr[i] + counts[i]
        indices = np.empty(indptr[n], dtype=np.int32)
        for i in range(n):
            k = indptr[i]
            for j in range(n):
                if i == j:
                    continue
                dx = xs[i] - xs[j]
                dy = ys[i] - ys[j]
                if dx * dx + dy * dy <= r2:
                    indices[k] = j
                    k += 1
        return indptr, indices


def adjacency_csr(xs: np.ndarray, ys: np.ndarray, radius: float):
    """Symmetric irreflexive unit-disk neighbor lists in CSR form.

    Boundary is inclusive: nodes at distance exactly ``radius`` are
    neighbors.  Neighbor indices within each row are ascending.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    if HAVE_NUMBA:
        return _adjacency_csr_numba(xs, ys, float(radius))
    return _adjacency_csr_numpy(xs, ys, float(radius))


# ---------------------------------------------------------------------------
# reachability over the CSR graph

def _bfs_numpy(indptr, indices, start, n):
    visited = np.zeros(n, dtype=np.bool_)
    visited[start] = True
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        nxt = []
        for u in frontier:
            nxt.append(indices[indptr[u]:indptr[u + 1]])
        cand = np.unique(np.concatenate(nxt)) if nxt else np.empty(0, np.int32)
        cand = cand[~visited[cand]]
        visited[cand] = True
        frontier = cand.astype(np.int64)
    return visited


if HAVE_NUMBA:

    @njit(cache=True)
    def _bfs_numba(indptr, indices, start, n):  # pragma: no cover - numba path
        visited = np.zeros(n, dtype=np.bool_)
        queue = np.empty(n, dtype=np.int64)
        visited[start] = True
        queue[0] = start
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if not visited[v]:
                    visited[v] = True
                    queue[tail] = v
                    tail += 1
        return visited


def bfs_reachable(indptr: np.ndarray, indices: np.ndarray, start: int, n: int) -> np.ndarray:
    """Boolean array of nodes reachable from ``start`` in the neighbor graph."""
    if HAVE_NUMBA:
        return _bfs_numba(indptr, indices, int(start), int(n))
    return _bfs_numpy(indptr, indices, int(start), int(n))


# ---------------------------------------------------------------------------
# airtime-overlap sweep for the collision audit
#
# Input rows describe every interval audible at a receiver (decoded or not,
# plus the receiver's own transmissions).  Rows must be lexsorted by
# (receiver, start).  A row overlaps another audible row at the same
# receiver when their open intervals intersect.  The sweep exploits the
# sort: a row overlaps some earlier-starting row iff the running maximum of
# earlier ends exceeds its start, and some later-starting row iff the next
# row starts before its end.

def _overlap_flags_numpy(receiver, start, end):
    n = receiver.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.bool_)
    new_block = np.empty(n, dtype=np.bool_)
    new_block[0] = True
    new_block[1:] = receiver[1:] != receiver[:-1]

    # running max of `end` over strictly earlier rows of the same block
    prev_max = np.full(n, -np.inf)
    block_starts = np.flatnonzero(new_block)
    bounds = np.append(block_starts, n)
    for b in range(block_starts.size):
        lo, hi = bounds[b], bounds[b + 1]
        if hi - lo > 1:
            prev_max[lo + 1:hi] = np.maximum.accumulate(end[lo:hi - 1])
    left = prev_max > start

    nxt_start = np.empty(n, dtype=np.float64)
    nxt_start[:-1] = start[1:]
    nxt_start[-1] = np.inf
    last_of_block = np.empty(n, dtype=np.bool_)
    last_of_block[:-1] = new_block[1:]
    last_of_block[-1] = True
    nxt_start[last_of_block] = np.inf
    right = nxt_start < end

    return left | right


if HAVE_NUMBA:

    @njit(cache=True)
    def _overlap_flags_numba(receiver, start, end):  # pragma: no cover - numba path
        n = receiver.shape[0]
        flags = np.zeros(n, dtype=np.bool_)
        i = 0
        while i < n:
            j = i
            while j < n and receiver[j] == receiver[i]:
                j += 1
            run = -1.0e300
            for k in range(i, j):
                if run > start[k]:
                    flags[k] = True
                if k + 1 < j and start[k + 1] < end[k]:
                    flags[k] = True
                if end[k] > run:
                    run = end[k]
            i = j
        return flags


def overlap_flags(receiver: np.ndarray, start: np.ndarray, end: np.ndarray) -> np.ndarray:
    """Per-row flag: does the row's open interval overlap any other row of
    the same receiver?  Rows must be lexsorted by (receiver, start)."""
    receiver = np.ascontiguousarray(receiver, dtype=np.int64)
    start = np.ascontiguousarray(start, dtype=np.float64)
    end = np.ascontiguousarray(end, dtype=np.float64)
    if HAVE_NUMBA:
        return _overlap_flags_numba(receiver, start, end)
    return _overlap_flags_numpy(receiver, start, end)
