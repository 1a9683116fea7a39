"""Suffix array, LCP array and constant-time lcp queries between any two suffixes.

Positions are 0-based throughout the package: suffix ``a`` is ``text[a:]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

RMQ_BLOCK_SHIFT = 5  # 32-entry blocks
RMQ_BLOCK = 1 << RMQ_BLOCK_SHIFT

# For kernels that never allocate. Without reference counting, calls that pass
# several arrays stay cheap inside hot loops.
leaf_kernel = nb.njit(cache=True, _nrt=False)


def as_symbols(data) -> np.ndarray:
    """Coerce bytes / str / int sequences to an int32 symbol array.

    Strings are latin-1 encoded when possible and UTF-8 encoded otherwise.
    Integer sequences with values outside [0, 255] are remapped to dense ranks
    (order preserving) so the alphabet stays small.
    """
    if isinstance(data, np.ndarray):
        arr = data.astype(np.int64, copy=False)
    elif isinstance(data, (bytes, bytearray, memoryview)):
        return np.frombuffer(bytes(data), dtype=np.uint8).astype(np.int32)
    elif isinstance(data, str):
        try:
            raw = data.encode("latin-1")
        except UnicodeEncodeError:
            raw = data.encode("utf-8")
        return np.frombuffer(raw, dtype=np.uint8).astype(np.int32)
    else:
        arr = np.asarray(list(data), dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        _, arr = np.unique(arr, return_inverse=True)
    return arr.astype(np.int32).reshape(-1)


@nb.njit(cache=True)
def suffix_array(s):
    """Prefix doubling with counting sorts; s holds non-negative ints."""
    n = s.shape[0]
    sa = np.empty(n, dtype=np.int32)
    if n == 0:
        return sa
    sigma = 0
    for i in range(n):
        if s[i] + 1 > sigma:
            sigma = s[i] + 1
    cnt = np.zeros(max(sigma, n) + 1, dtype=np.int64)
    for i in range(n):
        cnt[s[i] + 1] += 1
    for c in range(1, sigma + 1):
        cnt[c] += cnt[c - 1]
    for i in range(n):
        sa[cnt[s[i]]] = i
        cnt[s[i]] += 1
    rank = np.empty(n, dtype=np.int32)
    rank[sa[0]] = 0
    classes = 1
    for t in range(1, n):
        if s[sa[t]] != s[sa[t - 1]]:
            classes += 1
        rank[sa[t]] = classes - 1
    tmp = np.empty(n, dtype=np.int32)
    new_rank = np.empty(n, dtype=np.int32)
    k = 1
    while classes < n:
        # order by second key rank[i + k]; suffixes running off the end first
        p = 0
        for i in range(n - k, n):
            tmp[p] = i
            p += 1
        for t in range(n):
            if sa[t] >= k:
                tmp[p] = sa[t] - k
                p += 1
        # stable counting sort by first key
        for c in range(classes + 1):
            cnt[c] = 0
        for i in range(n):
            cnt[rank[i] + 1] += 1
        for c in range(1, classes + 1):
            cnt[c] += cnt[c - 1]
        for t in range(n):
            i = tmp[t]
            sa[cnt[rank[i]]] = i
            cnt[rank[i]] += 1
        new_rank[sa[0]] = 0
        classes = 1
        for t in range(1, n):
            a = sa[t - 1]
            b = sa[t]
            ra2 = rank[a + k] if a + k < n else -1
            rb2 = rank[b + k] if b + k < n else -1
            if rank[a] != rank[b] or ra2 != rb2:
                classes += 1
            new_rank[b] = classes - 1
        rank, new_rank = new_rank, rank
        k <<= 1
    return sa


@nb.njit(cache=True)
def inverse_permutation(sa):
    rank = np.empty(sa.shape[0], dtype=np.int32)
    for t in range(sa.shape[0]):
        rank[sa[t]] = t
    return rank


@nb.njit(cache=True)
def kasai_lcp(s, sa, rank):
    """lcp[t] = lcp(suffix sa[t-1], suffix sa[t]); lcp[0] = 0."""
    n = s.shape[0]
    lcp = np.zeros(n, dtype=np.int32)
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and s[i + h] == s[j + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


@nb.njit(cache=True)
def build_rmq(lcp):
    """Block decomposition: in-block prefix/suffix minima plus a sparse table over block minima."""
    n = lcp.shape[0]
    pre = np.empty(n, dtype=np.int32)
    suf = np.empty(n, dtype=np.int32)
    nblocks = (n + RMQ_BLOCK - 1) >> RMQ_BLOCK_SHIFT
    levels = 1
    while (1 << levels) <= nblocks:
        levels += 1
    table = np.empty((levels, max(nblocks, 1)), dtype=np.int32)
    for b in range(nblocks):
        lo = b << RMQ_BLOCK_SHIFT
        hi = min(lo + RMQ_BLOCK, n)
        m = lcp[lo]
        for t in range(lo, hi):
            if lcp[t] < m:
                m = lcp[t]
            pre[t] = m
        m = lcp[hi - 1]
        for t in range(hi - 1, lo - 1, -1):
            if lcp[t] < m:
                m = lcp[t]
            suf[t] = m
        table[0, b] = m
    for lv in range(1, levels):
        half = 1 << (lv - 1)
        for b in range(nblocks - (1 << lv) + 1):
            x = table[lv - 1, b]
            y = table[lv - 1, b + half]
            table[lv, b] = x if x < y else y
    return pre, suf, table


@nb.njit(cache=True, inline="always")
def _floor_log2(x):
    r = 0
    while x > 1:
        x >>= 1
        r += 1
    return r


@leaf_kernel
def range_min(lcp, pre, suf, table, lo, hi):
    """min(lcp[lo..hi]), inclusive, lo <= hi."""
    bl = lo >> RMQ_BLOCK_SHIFT
    bh = hi >> RMQ_BLOCK_SHIFT
    if bl == bh:
        m = lcp[lo]
        for t in range(lo + 1, hi + 1):
            if lcp[t] < m:
                m = lcp[t]
        return m
    m = suf[lo]
    if pre[hi] < m:
        m = pre[hi]
    if bh - bl > 1:
        a = bl + 1
        b = bh - 1
        lv = _floor_log2(b - a + 1)
        x = table[lv, a]
        y = table[lv, b - (1 << lv) + 1]
        if x < m:
            m = x
        if y < m:
            m = y
    return m


@leaf_kernel
def lcp_between(n, rank, lcp, pre, suf, table, a, b):
    """Longest common prefix of suffixes a and b (0-based)."""
    if a == b:
        return n - a
    ra = rank[a]
    rb = rank[b]
    if ra > rb:
        ra, rb = rb, ra
    return range_min(lcp, pre, suf, table, ra + 1, rb)


@nb.njit(cache=True)
def _build(s):
    sa = suffix_array(s)
    rank = inverse_permutation(sa)
    lcp = kasai_lcp(s, sa, rank)
    pre, suf, table = build_rmq(lcp)
    return sa, rank, lcp, pre, suf, table


@dataclass(frozen=True, eq=False)
class TextIndex:
    text: np.ndarray
    sa: np.ndarray
    rank: np.ndarray
    lcp: np.ndarray
    rmq_prefix: np.ndarray
    rmq_suffix: np.ndarray
    rmq_table: np.ndarray

    @property
    def n(self) -> int:
        return int(self.text.shape[0])

    def __len__(self) -> int:
        return self.n

    def kernel_arrays(self):
        """Arrays in the order the compiled lcp routines expect."""
        return self.rank, self.lcp, self.rmq_prefix, self.rmq_suffix, self.rmq_table

    def _check(self, a: int) -> None:
        if not 0 <= a < self.n:
            raise IndexError(f"position {a} outside [0, {self.n})")

    def lcp_query(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        return int(lcp_between(self.n, *self.kernel_arrays(), a, b))

    def compare_suffixes(self, a: int, b: int, remap=None) -> int:
        """-1, 0 or 1 as suffix a sorts before, equal to, or after suffix b.

        Decided by one lcp query plus the first mismatching symbol; `remap`
        (a symbol -> code mapping) changes how that symbol pair is ordered.
        """
        h = self.lcp_query(a, b)
        if a == b:
            return 0
        if a + h == self.n:
            return -1
        if b + h == self.n:
            return 1
        x, y = int(self.text[a + h]), int(self.text[b + h])
        if remap is not None:
            x, y = remap[x], remap[y]
        return -1 if x < y else 1


def build_index(data) -> TextIndex:
    s = as_symbols(data)
    sa, rank, lcp, pre, suf, table = _build(s)
    return TextIndex(s, sa, rank, lcp, pre, suf, table)


def lcp_query(idx: TextIndex, a: int, b: int) -> int:
    return idx.lcp_query(a, b)


def compare_suffixes(idx: TextIndex, a: int, b: int, remap=None) -> int:
    return idx.compare_suffixes(a, b, remap)
