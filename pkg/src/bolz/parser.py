"""Parsings and the drivers that produce them: bit-optimal and greedy LZ77."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numba as nb
import numpy as np

from .encoders import CostModel, kernel_code_length
from .fsg import ForwardStarGenerator
from .suffix_index import TextIndex, build_index


class ParseError(ValueError):
    """A phrase refers to text that has not been produced yet."""


@dataclass(frozen=True, slots=True)
class Literal:
    symbol: int

    @property
    def length(self) -> int:
        return 1


@dataclass(frozen=True, slots=True)
class Copy:
    d: int
    length: int


Phrase = Union[Literal, Copy]


@dataclass
class Parsing:
    phrases: list[Phrase] = field(default_factory=list)
    total_bits: int = 0

    def __len__(self) -> int:
        return len(self.phrases)

    @property
    def text_length(self) -> int:
        return sum(p.length for p in self.phrases)

    @classmethod
    def from_arrays(cls, text: np.ndarray, dists: np.ndarray, lengths: np.ndarray, total_bits: int) -> "Parsing":
        phrases: list[Phrase] = []
        pos = 0
        for d, ln in zip(dists.tolist(), lengths.tolist()):
            phrases.append(Literal(int(text[pos])) if d == 0 else Copy(d, ln))
            pos += ln
        return cls(phrases, int(total_bits))


def parse_cost(parsing: Parsing, model: CostModel) -> int:
    """Recompute the bit cost of `parsing`, validating every copy."""
    bits = 0
    pos = 0
    for ph in parsing.phrases:
        if isinstance(ph, Literal):
            bits += model.literal_cost
            pos += 1
            continue
        if ph.length < 1 or ph.d < 1:
            raise ParseError(f"bad copy {ph} at {pos}")
        if ph.d > pos:
            raise ParseError(f"copy {ph} at {pos} reaches before the text start")
        bits += model.copy_cost(ph.d, ph.length)
        pos += ph.length
    return bits


def expand(parsing: Parsing) -> bytes:
    """Rebuild the text; overlapping copies are expanded symbol by symbol."""
    out = bytearray()
    for ph in parsing.phrases:
        if isinstance(ph, Literal):
            out.append(ph.symbol)
            continue
        if ph.d < 1 or ph.d > len(out) or ph.length < 1:
            raise ParseError(f"copy {ph} at {len(out)} reaches outside the produced text")
        start = len(out) - ph.d
        if ph.d >= ph.length:
            out += out[start:start + ph.length]
        else:
            for k in range(ph.length):
                out.append(out[start + k])
    return bytes(out)


def _index_for(data, index: TextIndex | None) -> TextIndex:
    if index is not None:
        return index
    return build_index(data)


def optimal_parse(data, model: CostModel | None = None, max_distance: int | None = None,
                  index: TextIndex | None = None, leaf_order: str = "rank",
                  edge_counts: np.ndarray | None = None) -> Parsing:
    """Bit-optimal parsing under `model` (shortest path over maximal edges).

    `edge_counts`, if given, must be an int32 array of length n and receives
    the number of copy edges generated at each vertex.
    """
    model = model or CostModel()
    idx = _index_for(data, index)
    if idx.n == 0:
        return Parsing([], 0)
    gen = ForwardStarGenerator(idx, model, max_distance, leaf_order)
    bits, lengths, dists = gen.run_parse(edge_counts)
    return Parsing.from_arrays(idx.text, dists, lengths, bits)


@nb.njit(cache=True)
def greedy_kernel(text, n, sa, rank, lcp, max_d, params):
    """Longest previous match at each phrase start, rightmost source on ties."""
    fkind, fwidth, gkind, gwidth, lit_bits = params
    dists = np.empty(n, dtype=np.int64)
    lengths = np.empty(n, dtype=np.int64)
    k = 0
    bits = 0
    i = 0
    big = n + 1
    while i < n:
        best = 0
        best_pos = -1
        r = rank[i]
        cur = big
        t = r
        while t > 0:
            if lcp[t] < cur:
                cur = lcp[t]
            if cur == 0 or cur < best:
                break
            p = sa[t - 1]
            if p < i and i - p <= max_d and (cur > best or p > best_pos):
                best = cur
                best_pos = p
            t -= 1
        cur = big
        t = r + 1
        while t < n:
            if lcp[t] < cur:
                cur = lcp[t]
            if cur == 0 or cur < best:
                break
            p = sa[t]
            if p < i and i - p <= max_d and (cur > best or p > best_pos):
                best = cur
                best_pos = p
            t += 1
        if best == 0:
            dists[k] = 0
            lengths[k] = 1
            bits += kernel_code_length(fkind, fwidth, 1) + lit_bits
            i += 1
        else:
            dists[k] = i - best_pos
            lengths[k] = best
            bits += kernel_code_length(fkind, fwidth, i - best_pos + 1) + kernel_code_length(gkind, gwidth, best)
            i += best
        k += 1
    return bits, lengths[:k].copy(), dists[:k].copy()


def greedy_parse(data, model: CostModel | None = None, max_distance: int | None = None,
                 index: TextIndex | None = None) -> Parsing:
    """Classic LZ77: always the longest previous match, literal only when none exists."""
    model = model or CostModel()
    idx = _index_for(data, index)
    if idx.n == 0:
        return Parsing([], 0)
    max_d = idx.n if not max_distance else max_distance
    bits, lengths, dists = greedy_kernel(idx.text, idx.n, idx.sa, idx.rank, idx.lcp, max_d,
                                         model.kernel_params())
    return Parsing.from_arrays(idx.text, dists, lengths, bits)
