"""On-the-fly forward-star generation of maximal parse-graph edges.

One pass per distance cost class [l, r] of the distance code. Each pass cuts
the vertices into blocks of r - l + 1 consecutive positions and, for the block
holding the current vertex, keeps a maximal-position candidate per vertex. A
block is built only when the parser first reaches one of its vertices, and
dropped when it moves past it, so the live state over all passes is one block
per class: O(n) words in total.

For a vertex i the generator walks the classes from near to far, keeps the
longest copy found so far, and for every class that beats it emits the edges
that end a length cost class inside the newly reached range of lengths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from .encoders import CostModel, kernel_class_end, kernel_code_length, num_classes
from .suffix_index import TextIndex, leaf_kernel
from .window_trie import (
    LEAF_ORDER_RANK,
    LEAF_ORDER_REMAP,
    NONE,
    BlockScratch,
    block_maximal_positions,
)

# columns of the per-class state table
C_LO, C_HI, C_COST, C_OFF, C_BLOCK = range(5)


@dataclass(frozen=True)
class MaximalEdge:
    source: int
    target: int
    d: int
    length: int
    cost: int

    @property
    def is_literal(self) -> bool:
        return self.d == 0


@dataclass(frozen=True)
class ClassPass:
    """Static description of one distance-class pass."""

    dist_lo: int
    dist_hi: int
    cost: int

    @property
    def block_size(self) -> int:
        return self.dist_hi - self.dist_lo + 1


def max_copy_distance(n: int, max_distance: int | None) -> int:
    limit = n - 1
    if max_distance is not None and max_distance > 0:
        limit = min(limit, max_distance)
    return max(limit, 0)


def class_passes(model: CostModel, n: int, max_distance: int | None = None) -> list[ClassPass]:
    table = model.distance_classes(max_copy_distance(n, max_distance))
    if table is None:
        return []
    return [ClassPass(c.lo, c.hi, c.cost) for c in table]


def edge_bound(model: CostModel, n: int, max_distance: int | None = None) -> int:
    """Q(f, n') + Q(g, n): per-vertex ceiling on emitted copy edges."""
    return len(class_passes(model, n, max_distance)) + num_classes(model.g, n)


def subdivide_length_classes(prev_len: int, cand_len: int, model: CostModel) -> list[tuple[int, int]]:
    """One (length, g-cost) per length class meeting [prev_len + 1, cand_len], at its longest length."""
    if not 0 <= prev_len < cand_len:
        raise ValueError("need 0 <= prev_len < cand_len")
    out = []
    x = prev_len + 1
    while x <= cand_len:
        e = min(model.g.class_end(x), cand_len)
        out.append((e, model.g.length(e)))
        x = e + 1
    return out


@nb.njit(cache=True)
def ensure_block(k, i, text, n, ix, sc, cls, leaf_order, mp_pos, mp_len):
    size = cls[k, C_HI] - cls[k, C_LO] + 1
    blo = (i // size) * size
    if cls[k, C_BLOCK] == blo:
        return
    bhi = min(blo + size - 1, n - 1)
    off = cls[k, C_OFF]
    rank, lcp, pre, suf, table, sa = ix
    codes, touched, leaves, keys, parent, depth, post, stack, a, left_last, right_first = sc
    block_maximal_positions(text, n, rank, lcp, pre, suf, table, sa, blo, bhi, cls[k, C_LO], cls[k, C_HI],
                            leaf_order, codes, touched, leaves, keys, parent, depth, post, stack,
                            a, left_last, right_first, mp_pos[off:off + size], mp_len[off:off + size])
    cls[k, C_BLOCK] = blo


@nb.njit(cache=True)
def ensure_blocks(i, text, n, ix, sc, cls, leaf_order, mp_pos, mp_len):
    """Bring every pass's block up to vertex i; return the first vertex needing a refresh."""
    nxt = n
    for k in range(cls.shape[0]):
        size = cls[k, C_HI] - cls[k, C_LO] + 1
        if cls[k, C_BLOCK] != (i // size) * size:
            ensure_block(k, i, text, n, ix, sc, cls, leaf_order, mp_pos, mp_len)
        end = cls[k, C_BLOCK] + size
        if end < nxt:
            nxt = end
    return nxt


@leaf_kernel
def emit_forward_star(i, n, cls, mp_pos, mp_len, params, out_j, out_d, out_c):
    """Write the literal edge and the maximal copy edges of vertex i; return the count.

    Every pass's block must already cover i (see ensure_blocks).
    """
    fkind, fwidth, gkind, gwidth, lit_bits = params
    out_j[0] = i + 1
    out_d[0] = 0
    out_c[0] = kernel_code_length(fkind, fwidth, 1) + lit_bits
    cnt = 1
    best = 0
    room = n - i
    for k in range(cls.shape[0]):
        slot = cls[k, C_OFF] + i - cls[k, C_BLOCK]
        s = mp_pos[slot]
        if s == NONE:
            continue
        d = i - s
        if d < cls[k, C_LO] or d > cls[k, C_HI] or s < 0:
            continue
        q = mp_len[slot]
        if q > room:
            q = room
        if q <= best:
            continue
        fcost = cls[k, C_COST]
        x = best + 1
        while x <= q:
            e = kernel_class_end(gkind, gwidth, x)
            if e > q:
                e = q
            out_j[cnt] = i + e
            out_d[cnt] = d
            out_c[cnt] = fcost + kernel_code_length(gkind, gwidth, e)
            cnt += 1
            x = e + 1
        best = q
    return cnt


@nb.njit(cache=True)
def optimal_parse_kernel(text, n, ix, sc, cls, leaf_order, mp_pos, mp_len, params,
                         out_j, out_d, out_c, edge_counts):
    """Shortest path over generated edges in topological order.

    Returns (bits, lengths, dists) with the phrases in text order. Ties keep
    the first relaxation, i.e. the longest phrase into a vertex, and at a
    single source the literal before any copy.
    """
    inf = np.iinfo(np.int64).max
    cost = np.full(n + 1, inf, dtype=np.int64)
    pred_len = np.zeros(n + 1, dtype=np.int32)
    pred_d = np.zeros(n + 1, dtype=np.int32)
    cost[0] = 0
    record = edge_counts.shape[0] == n
    refresh = 0
    for i in range(n):
        if i >= refresh:
            refresh = ensure_blocks(i, text, n, ix, sc, cls, leaf_order, mp_pos, mp_len)
        cnt = emit_forward_star(i, n, cls, mp_pos, mp_len, params, out_j, out_d, out_c)
        if record:
            edge_counts[i] = cnt - 1
        ci = cost[i]
        for e in range(cnt):
            j = out_j[e]
            c = ci + out_c[e]
            if c < cost[j]:
                cost[j] = c
                pred_len[j] = j - i
                pred_d[j] = out_d[e]
    phrases = 0
    j = n
    while j > 0:
        j -= pred_len[j]
        phrases += 1
    lengths = np.empty(phrases, dtype=np.int64)
    dists = np.empty(phrases, dtype=np.int64)
    j = n
    t = phrases
    while j > 0:
        t -= 1
        lengths[t] = pred_len[j]
        dists[t] = pred_d[j]
        j -= pred_len[j]
    return cost[n], lengths, dists


class ForwardStarGenerator:
    """Generator state over one text: class passes plus their live blocks.

    Call :meth:`forward_star` with strictly increasing vertices.
    """

    def __init__(self, idx: TextIndex, model: CostModel, max_distance: int | None = None,
                 leaf_order: str = "rank") -> None:
        if leaf_order not in ("rank", "remap"):
            raise ValueError("leaf_order must be 'rank' or 'remap'")
        self.idx = idx
        self.model = model
        self.max_distance = max_distance
        self.passes = class_passes(model, idx.n, max_distance)
        self.leaf_order = LEAF_ORDER_RANK if leaf_order == "rank" else LEAF_ORDER_REMAP
        cls = np.zeros((len(self.passes), 5), dtype=np.int64)
        off = 0
        widest = 0
        for k, p in enumerate(self.passes):
            cls[k] = (p.dist_lo, p.dist_hi, p.cost, off, NONE)
            off += p.block_size
            widest = max(widest, p.block_size)
        self.cls = cls
        self.mp_pos = np.full(max(off, 1), NONE, dtype=np.int64)
        self.mp_len = np.zeros(max(off, 1), dtype=np.int64)
        # a block and its window span at most three block lengths
        scratch = BlockScratch(3 * widest + 2)
        self.scratch = (scratch.codes, scratch.touched, scratch.leaves, scratch.keys, scratch.parent,
                        scratch.depth, scratch.post, scratch.stack, scratch.a, scratch.left_last,
                        scratch.right_first)
        self.bound = len(self.passes) + num_classes(model.g, idx.n)
        self._out = tuple(np.zeros(self.bound + 2, dtype=np.int64) for _ in range(3))
        self._ix = idx.kernel_arrays() + (idx.sa,)
        self._last = -1

    @property
    def params(self) -> tuple[int, int, int, int, int]:
        return self.model.kernel_params()

    def live_blocks(self) -> list[tuple[int, int] | None]:
        """Current block of each pass (None before its first use)."""
        out = []
        for k, p in enumerate(self.passes):
            blo = int(self.cls[k, C_BLOCK])
            out.append(None if blo == NONE else (blo, min(blo + p.block_size, self.idx.n) - 1))
        return out

    def forward_star(self, i: int) -> list[MaximalEdge]:
        if not 0 <= i < self.idx.n:
            raise IndexError(f"vertex {i} outside [0, {self.idx.n})")
        if i <= self._last:
            raise ValueError(f"forward_star called out of order: {i} after {self._last}")
        self._last = i
        out_j, out_d, out_c = self._out
        ensure_blocks(i, self.idx.text, self.idx.n, self._ix, self.scratch, self.cls, self.leaf_order,
                      self.mp_pos, self.mp_len)
        cnt = emit_forward_star(i, self.idx.n, self.cls, self.mp_pos, self.mp_len, self.params,
                                out_j, out_d, out_c)
        return [
            MaximalEdge(i, int(out_j[e]), int(out_d[e]), int(out_j[e]) - i, int(out_c[e]))
            for e in range(cnt)
        ]

    def run_parse(self, edge_counts: np.ndarray | None = None):
        """Run the whole shortest-path sweep in compiled code (fresh generator only)."""
        if self._last != -1:
            raise ValueError("run_parse needs a fresh generator")
        self._last = self.idx.n
        counts = np.zeros(0, dtype=np.int32) if edge_counts is None else edge_counts
        out_j, out_d, out_c = self._out
        return optimal_parse_kernel(self.idx.text, self.idx.n, self._ix, self.scratch,
                                    self.cls, self.leaf_order, self.mp_pos, self.mp_len, self.params,
                                    out_j, out_d, out_c, counts)


def open_generator(idx: TextIndex, model: CostModel, max_distance: int | None = None,
                   leaf_order: str = "rank") -> ForwardStarGenerator:
    return ForwardStarGenerator(idx, model, max_distance, leaf_order)


def forward_star(state: ForwardStarGenerator, i: int) -> list[MaximalEdge]:
    return state.forward_star(i)
