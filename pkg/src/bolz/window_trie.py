"""Per-block compact tries over text suffixes and the maximal-position sweep.

A block trie indexes the suffixes starting in a block of vertices B and in the
window W_B of positions those vertices may copy from under one distance cost
class. The trie is unordered: any leaf order that is lexicographic under some
injective relabelling of the symbols yields the same lca structure, which is
all the sweep needs.

The compiled kernels in this module are shared with the forward-star
generator; the Python wrappers exist for inspection and testing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from .suffix_index import TextIndex, lcp_between, leaf_kernel, range_min, suffix_array

NONE = -1
INF = np.iinfo(np.int64).max

LEAF_ORDER_RANK = 0  # restrict the global suffix array to the block
LEAF_ORDER_REMAP = 1  # pair-string sort of remapped suffixes, then merge

RADIX_BITS = 11
DIRECT_LCP = 8  # symbol comparisons tried before an lcp query
RADIX = 1 << RADIX_BITS
RADIX_MASK = RADIX - 1


# ---------------------------------------------------------------- remapping


@dataclass(frozen=True)
class RemapTable:
    """Injective relabelling of symbols, first-occurrence order over some ranges.

    Symbols seen in the ranges get codes 0, 1, ... in order of first
    occurrence; every other symbol s gets ``size + s`` so the map stays
    injective on the whole alphabet.
    """

    codes: np.ndarray
    size: int

    @classmethod
    def from_ranges(cls, text: np.ndarray, ranges, alphabet: int = 256) -> "RemapTable":
        codes = np.full(max(alphabet, int(text.max(initial=0)) + 1), NONE, dtype=np.int64)
        size = _fill_first_occurrence(text, np.asarray(ranges, dtype=np.int64).reshape(-1, 2), codes)
        return cls(codes, int(size))

    def __getitem__(self, symbol: int) -> int:
        return int(self.codes[symbol])

    def apply(self, text: np.ndarray) -> np.ndarray:
        return self.codes[text]


@nb.njit(cache=True)
def _fill_first_occurrence(text, ranges, codes):
    size = 0
    for k in range(ranges.shape[0]):
        for p in range(ranges[k, 0], ranges[k, 1] + 1):
            c = text[p]
            if codes[c] == NONE:
                codes[c] = size
                size += 1
    for c in range(codes.shape[0]):
        if codes[c] == NONE:
            codes[c] = size + c
    return size


@leaf_kernel
def _touch_codes(text, lo, hi, codes, touched, size):
    """Incremental first-occurrence remap over text[lo..hi]; codes must start at NONE."""
    for p in range(lo, hi + 1):
        c = text[p]
        if codes[c] == NONE:
            codes[c] = size
            touched[size] = c
            size += 1
    return size


@leaf_kernel
def _reset_codes(codes, touched, size):
    for k in range(size):
        codes[touched[k]] = NONE


@leaf_kernel
def _code_of(codes, size, c):
    x = codes[c]
    return x if x != NONE else size + c


@leaf_kernel
def compare_remapped(text, n, rank, lcp, pre, suf, table, codes, size, a, b):
    """Order of remapped suffixes a and b: one lcp query plus the first mismatch."""
    if a == b:
        return 0
    if a >= n:
        return -1
    if b >= n:
        return 1
    h = lcp_between(n, rank, lcp, pre, suf, table, a, b)
    if a + h >= n:
        return -1
    if b + h >= n:
        return 1
    x = _code_of(codes, size, text[a + h])
    y = _code_of(codes, size, text[b + h])
    return -1 if x < y else 1


# ------------------------------------------------------------------ sorting


@nb.njit(cache=True)
def _pair_string_sort(text, n, rank, lcp, pre, suf, table, codes, size, lo, hi, out, off):
    """Sort positions lo..hi by remapped suffix via the pair string; writes out[off:]."""
    m = hi - lo + 1
    if m == 1:
        out[off] = lo
        return
    w = np.empty(m, dtype=np.int64)
    for t in range(m):
        h = lo + t
        if h == hi:
            b = 0
        else:
            b = compare_remapped(text, n, rank, lcp, pre, suf, table, codes, size, h + 1, hi + 1)
        w[t] = 3 * _code_of(codes, size, text[h]) + (b + 1)
    sa = suffix_array(w)
    for t in range(m):
        out[off + t] = lo + sa[t]


@leaf_kernel
def _merge(text, n, rank, lcp, pre, suf, table, codes, size, a, na, b, nbb, out):
    """Merge two remap-sorted position lists, dropping positions present in both."""
    i = 0
    j = 0
    k = 0
    while i < na and j < nbb:
        c = compare_remapped(text, n, rank, lcp, pre, suf, table, codes, size, a[i], b[j])
        if c < 0:
            out[k] = a[i]
            i += 1
        elif c > 0:
            out[k] = b[j]
            j += 1
        else:
            out[k] = a[i]
            i += 1
            j += 1
        k += 1
    while i < na:
        out[k] = a[i]
        i += 1
        k += 1
    while j < nbb:
        out[k] = b[j]
        j += 1
        k += 1
    return k


@nb.njit(cache=True)
def _radix_sort(keys, m, tmp, nbits):
    """In-place LSD radix sort of keys[0:m] (non-negative, < 2**nbits)."""
    if m < 64:
        for t in range(1, m):
            x = keys[t]
            u = t - 1
            while u >= 0 and keys[u] > x:
                keys[u + 1] = keys[u]
                u -= 1
            keys[u + 1] = x
        return
    cnt = np.zeros(RADIX + 1, dtype=np.int64)
    src, dst = keys, tmp
    shift = 0
    passes = 0
    while shift < nbits:
        cnt[:] = 0
        for t in range(m):
            cnt[((src[t] >> shift) & RADIX_MASK) + 1] += 1
        for c in range(RADIX):
            cnt[c + 1] += cnt[c]
        for t in range(m):
            b = (src[t] >> shift) & RADIX_MASK
            dst[cnt[b]] = src[t]
            cnt[b] += 1
        src, dst = dst, src
        shift += RADIX_BITS
        passes += 1
    if passes % 2 == 1:
        keys[:m] = tmp[:m]


@nb.njit(cache=True)
def _sorted_union_by_rank(rank, sa, blo, bhi, wlo, whi, keys, out, tmp):
    """Positions of [blo,bhi] U [wlo,whi] (window may be empty) in global suffix order.

    keys[0:m] receives their ranks, sorted.
    """
    m = 0
    if wlo <= whi:
        for p in range(wlo, whi + 1):
            if p < blo or p > bhi:
                keys[m] = rank[p]
                m += 1
    for p in range(blo, bhi + 1):
        keys[m] = rank[p]
        m += 1
    nbits = 1
    while (1 << nbits) < sa.shape[0]:
        nbits += 1
    _radix_sort(keys, m, tmp, nbits)
    for t in range(m):
        out[t] = sa[keys[t]]
    return m


@nb.njit(cache=True)
def _sorted_union_by_remap(text, n, rank, lcp, pre, suf, table, codes, touched,
                           blo, bhi, wlo, whi, out):
    """Remap route: sort each range by remapped suffix (or their union when they touch) and merge."""
    size = 0
    if wlo > whi:
        size = _touch_codes(text, blo, bhi, codes, touched, size)
        _pair_string_sort(text, n, rank, lcp, pre, suf, table, codes, size, blo, bhi, out, 0)
        _reset_codes(codes, touched, size)
        return bhi - blo + 1
    lo1, hi1, lo2, hi2 = wlo, whi, blo, bhi
    if lo2 < lo1:
        lo1, hi1, lo2, hi2 = blo, bhi, wlo, whi
    size = _touch_codes(text, lo1, hi1, codes, touched, size)
    size = _touch_codes(text, lo2, hi2, codes, touched, size)
    if lo2 <= hi1 + 1:
        lo = lo1
        hi = max(hi1, hi2)
        _pair_string_sort(text, n, rank, lcp, pre, suf, table, codes, size, lo, hi, out, 0)
        m = hi - lo + 1
    else:
        na = hi1 - lo1 + 1
        nbb = hi2 - lo2 + 1
        a = np.empty(na, dtype=out.dtype)
        b = np.empty(nbb, dtype=out.dtype)
        _pair_string_sort(text, n, rank, lcp, pre, suf, table, codes, size, lo1, hi1, a, 0)
        _pair_string_sort(text, n, rank, lcp, pre, suf, table, codes, size, lo2, hi2, b, 0)
        m = _merge(text, n, rank, lcp, pre, suf, table, codes, size, a, na, b, nbb, out)
    _reset_codes(codes, touched, size)
    return m


# --------------------------------------------------------------- the trie


@leaf_kernel
def _build_tree(text, n, rank, lcp, pre, suf, table, leaves, m, parent, depth, post, stack, keys, ranked):
    """lcp-interval tree over leaves[0:m] (any consistent suffix order).

    With `ranked`, keys[0:m] holds the leaves' sorted ranks and adjacent lcps
    come from one range minimum each. Short lcps are settled by comparing
    symbols directly, which avoids scattered table reads for nearby suffixes.

    Nodes 0..m-1 are the leaves in order, internal nodes follow. Fills
    parent/depth and the post-order in `post`; returns the node count.
    """
    for t in range(m):
        depth[t] = n - leaves[t]
    nn = m
    npost = 0
    sp = 0
    if m == 0:
        return 0
    stack[0] = 0
    sp = 1
    for t in range(1, m):
        x = leaves[t - 1]
        y = leaves[t]
        h = 0
        while h < DIRECT_LCP and y + h < n and x + h < n and text[x + h] == text[y + h]:
            h += 1
        if h == DIRECT_LCP:
            if ranked:
                h = range_min(lcp, pre, suf, table, keys[t - 1] + 1, keys[t])
            else:
                h = lcp_between(n, rank, lcp, pre, suf, table, x, y)
        while sp > 0:
            top = stack[sp - 1]
            if top >= m and depth[top] <= h:
                break
            sp -= 1
            post[npost] = top
            npost += 1
            if sp > 0 and depth[stack[sp - 1]] >= h:
                parent[top] = stack[sp - 1]
            else:
                depth[nn] = h
                parent[top] = nn
                stack[sp] = nn
                sp += 1
                nn += 1
                break
        stack[sp] = t
        sp += 1
    while sp > 0:
        sp -= 1
        top = stack[sp]
        post[npost] = top
        npost += 1
        parent[top] = stack[sp - 1] if sp > 0 else NONE
    return nn


@leaf_kernel
def _annotate(leaves, m, nn, parent, post, blo, bhi, left_lo, left_hi, right_lo, right_hi,
              a, left_last, right_first):
    """a(u): smallest block position below u; left_last(u): rightmost position
    below u in the left window half; right_first(u): leftmost in the right half."""
    for u in range(nn):
        a[u] = INF
        left_last[u] = NONE
        right_first[u] = INF
    for t in range(m):
        p = leaves[t]
        if blo <= p <= bhi:
            a[t] = p
        if left_lo <= p <= left_hi:
            left_last[t] = p
        if right_lo <= p <= right_hi:
            right_first[t] = p
    for k in range(nn):
        u = post[k]
        v = parent[u]
        if v == NONE:
            continue
        if a[u] < a[v]:
            a[v] = a[u]
        if left_last[u] > left_last[v]:
            left_last[v] = left_last[u]
        if right_first[u] < right_first[v]:
            right_first[v] = right_first[u]


@leaf_kernel
def _sweep(nn, parent, depth, post, a, left_last, right_first, blo, dist_lo, dist_hi,
           mp_pos, mp_len):
    """Post-order assignment of maximal positions for the block's vertices.

    mp_pos/mp_len are indexed by h - blo and must be NONE/0 on entry.
    """
    for k in range(nn):
        u = post[k]
        h = a[u]
        if h == INF or mp_pos[h - blo] != NONE:
            continue
        wh = h - dist_lo
        if wh < 0:
            continue
        wl = max(h - dist_hi, 0)
        x = left_last[u]
        if x != NONE and wl <= x <= wh:
            mp_pos[h - blo] = x
            mp_len[h - blo] = depth[u]
            continue
        x = right_first[u]
        if x != INF and wl <= x <= wh:
            mp_pos[h - blo] = x
            mp_len[h - blo] = depth[u]
    for u in range(nn):
        v = parent[u]
        h = a[u]
        if v == NONE or h == INF or mp_pos[h - blo] != NONE:
            continue
        if h - dist_lo < 0:
            continue
        if a[v] != h:
            mp_pos[h - blo] = a[v]
            mp_len[h - blo] = depth[v]


@leaf_kernel
def block_window(n, blo, bhi, dist_lo, dist_hi):
    """Clamped window W_B and its split into halves for block [blo, bhi].

    Returns (wlo, whi, left_hi); the left half is [wlo, left_hi], the right
    half [left_hi + 1, whi]. An empty window has wlo > whi.
    """
    wlo = max(blo - dist_hi, 0)
    whi = min(bhi - dist_lo, n - 1)
    left_hi = blo - dist_lo
    return wlo, whi, left_hi


@nb.njit(cache=True)
def block_maximal_positions(text, n, rank, lcp, pre, suf, table, sa, blo, bhi, dist_lo, dist_hi,
                            leaf_order, codes, touched, leaves, keys, parent, depth, post, stack,
                            a, left_last, right_first, mp_pos, mp_len):
    """Build the block trie in the scratch buffers and run the sweep.

    Results land in mp_pos[0:bhi-blo+1] and mp_len[0:bhi-blo+1].
    """
    nb_ = bhi - blo + 1
    for t in range(nb_):
        mp_pos[t] = NONE
        mp_len[t] = 0
    wlo, whi, left_hi = block_window(n, blo, bhi, dist_lo, dist_hi)
    if leaf_order == LEAF_ORDER_RANK:
        m = _sorted_union_by_rank(rank, sa, blo, bhi, wlo, whi, keys, leaves, post)
    else:
        m = _sorted_union_by_remap(text, n, rank, lcp, pre, suf, table, codes, touched,
                                   blo, bhi, wlo, whi, leaves)
    nn = _build_tree(text, n, rank, lcp, pre, suf, table, leaves, m, parent, depth, post, stack,
                     keys, leaf_order == LEAF_ORDER_RANK)
    _annotate(leaves, m, nn, parent, post, blo, bhi, wlo, min(left_hi, whi),
              max(left_hi + 1, wlo), whi, a, left_last, right_first)
    _sweep(nn, parent, depth, post, a, left_last, right_first, blo, dist_lo, dist_hi,
           mp_pos, mp_len)
    return m, nn


class BlockScratch:
    """Reusable buffers for block tries with at most `capacity` leaves."""

    def __init__(self, capacity: int, alphabet: int = 256) -> None:
        cap = max(capacity, 1)
        self.capacity = cap
        self.codes = np.full(alphabet, NONE, dtype=np.int64)
        self.touched = np.zeros(alphabet, dtype=np.int64)
        self.leaves = np.zeros(cap, dtype=np.int64)
        self.keys = np.zeros(cap, dtype=np.int64)
        self.parent = np.zeros(2 * cap, dtype=np.int64)
        self.depth = np.zeros(2 * cap, dtype=np.int64)
        self.post = np.zeros(2 * cap, dtype=np.int64)
        self.stack = np.zeros(2 * cap, dtype=np.int64)
        self.a = np.zeros(2 * cap, dtype=np.int64)
        self.left_last = np.zeros(2 * cap, dtype=np.int64)
        self.right_first = np.zeros(2 * cap, dtype=np.int64)


# ----------------------------------------------------------- Python surface


def _range_checked(idx: TextIndex, lo: int, hi: int) -> None:
    if not 0 <= lo <= hi < idx.n:
        raise IndexError(f"range [{lo}, {hi}] outside [0, {idx.n})")


def _remap_args(idx: TextIndex, remap: RemapTable):
    # kernels read codes for symbols and fall back to size + symbol when unset
    return remap.codes, remap.size


def sort_range_suffixes(idx: TextIndex, lo: int, hi: int, remap: RemapTable | None = None) -> list[int]:
    """Positions lo..hi ordered by their remapped suffixes.

    Uses the pair-string reduction: each position h carries its remapped
    symbol and whether the remapped suffix at h + 1 sorts below, at, or above
    the one at hi + 1; sorting the suffixes of that pair string sorts the
    range. `remap` defaults to first-occurrence order over the range.
    """
    _range_checked(idx, lo, hi)
    if remap is None:
        remap = RemapTable.from_ranges(idx.text, [(lo, hi)])
    out = np.empty(hi - lo + 1, dtype=np.int64)
    codes, size = _remap_args(idx, remap)
    _pair_string_sort(idx.text, idx.n, *idx.kernel_arrays(), codes, size, lo, hi, out, 0)
    return out.tolist()


def merge_sorted_suffix_lists(idx: TextIndex, first, second, remap: RemapTable | None = None) -> list[int]:
    """Merge two suffix lists sorted under the same remap (identity if None)."""
    a = np.asarray(list(first), dtype=np.int64)
    b = np.asarray(list(second), dtype=np.int64)
    if remap is None:
        codes = np.arange(max(256, int(idx.text.max(initial=0)) + 1), dtype=np.int64)
        size = 0
    else:
        codes, size = _remap_args(idx, remap)
    out = np.empty(len(a) + len(b), dtype=np.int64)
    k = _merge(idx.text, idx.n, *idx.kernel_arrays(), codes, size, a, len(a), b, len(b), out)
    return out[:k].tolist()


@dataclass(frozen=True, eq=False)
class BlockTrie:
    """Unordered compact trie over the suffixes starting in B U W_B.

    Nodes 0..len(leaves)-1 are leaves (node t is the suffix at leaves[t]);
    internal nodes follow. Per-node arrays use INF / NONE for "no such leaf".
    """

    block: tuple[int, int]
    window: tuple[int, int]
    left_half: tuple[int, int]
    right_half: tuple[int, int]
    leaves: np.ndarray
    parent: np.ndarray
    depth: np.ndarray
    postorder: np.ndarray
    a: np.ndarray
    left_last: np.ndarray
    right_first: np.ndarray

    @property
    def node_count(self) -> int:
        return int(self.parent.shape[0])

    def is_leaf(self, u: int) -> bool:
        return u < len(self.leaves)

    def leaf_of(self, position: int) -> int:
        hits = np.flatnonzero(self.leaves == position)
        if hits.size == 0:
            raise KeyError(position)
        return int(hits[0])

    def ancestors(self, u: int) -> list[int]:
        out = [u]
        while self.parent[out[-1]] != NONE:
            out.append(int(self.parent[out[-1]]))
        return out

    def lca(self, u: int, v: int) -> int:
        up = set(self.ancestors(u))
        for w in self.ancestors(v):
            if w in up:
                return w
        raise ValueError("nodes are not in the same tree")

    def subtree_leaves(self, u: int) -> list[int]:
        """Positions of the leaves below node u (brute force, for checks)."""
        return [int(p) for t, p in enumerate(self.leaves) if u in self.ancestors(t)]


def build_block_trie(idx: TextIndex, block: tuple[int, int], window: tuple[int, int],
                     split: int | None = None, leaf_order: str = "remap") -> BlockTrie:
    """Trie over suffixes starting in `block` and `window` (both inclusive).

    The window is clamped to the text and may be empty. Its left half ends
    at `split`; by default split = window_hi - (block_hi - block_lo), which
    is h - l for the block's first vertex h when window = [lo - r, hi - l].
    `leaf_order` picks the pair-string/merge route ("remap") or a plain
    restriction of the global suffix array ("rank").
    """
    blo, bhi = block
    _range_checked(idx, blo, bhi)
    wlo, whi = max(window[0], 0), min(window[1], idx.n - 1)
    if split is None:
        split = window[1] - (bhi - blo)
    cap = (bhi - blo + 1) + max(whi - wlo + 1, 0)
    sc = BlockScratch(cap)
    order = LEAF_ORDER_RANK if leaf_order == "rank" else LEAF_ORDER_REMAP
    if order == LEAF_ORDER_RANK:
        m = _sorted_union_by_rank(idx.rank, idx.sa, blo, bhi, wlo, whi, sc.keys, sc.leaves, sc.post)
    else:
        m = _sorted_union_by_remap(idx.text, idx.n, *idx.kernel_arrays(), sc.codes, sc.touched,
                                   blo, bhi, wlo, whi, sc.leaves)
    nn = _build_tree(idx.text, idx.n, *idx.kernel_arrays(), sc.leaves, m, sc.parent, sc.depth, sc.post, sc.stack,
                     sc.keys, order == LEAF_ORDER_RANK)
    left = (wlo, min(split, whi))
    right = (max(split + 1, wlo), whi)
    _annotate(sc.leaves, m, nn, sc.parent, sc.post, blo, bhi, left[0], left[1], right[0], right[1],
              sc.a, sc.left_last, sc.right_first)
    return BlockTrie(
        block=(blo, bhi),
        window=(wlo, whi),
        left_half=left,
        right_half=right,
        leaves=sc.leaves[:m].copy(),
        parent=sc.parent[:nn].copy(),
        depth=sc.depth[:nn].copy(),
        postorder=sc.post[:nn].copy(),
        a=sc.a[:nn].copy(),
        left_last=sc.left_last[:nn].copy(),
        right_first=sc.right_first[:nn].copy(),
    )


def compute_maximal_positions(trie: BlockTrie, window_offsets: tuple[int, int]) -> dict[int, tuple[int, int]]:
    """Maximal position candidates for the block's vertices.

    `window_offsets` = (l, r) is the distance class, so vertex h may copy
    from W_h = [h - r, h - l]. Returns h -> (position, lcp length) for every
    vertex that received a candidate. When h has a d-maximal edge of this
    class the candidate is a position of W_h with the largest lcp with h;
    otherwise it is only a hint and may lie outside W_h.
    """
    blo, bhi = trie.block
    dist_lo, dist_hi = window_offsets
    mp_pos = np.full(bhi - blo + 1, NONE, dtype=np.int64)
    mp_len = np.zeros(bhi - blo + 1, dtype=np.int64)
    _sweep(trie.node_count, trie.parent, trie.depth, trie.postorder, trie.a, trie.left_last,
           trie.right_first, blo, dist_lo, dist_hi, mp_pos, mp_len)
    return {blo + t: (int(mp_pos[t]), int(mp_len[t])) for t in range(bhi - blo + 1) if mp_pos[t] != NONE}
