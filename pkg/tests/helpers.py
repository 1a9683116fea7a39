"""Brute-force reference routines shared by the tests."""

import random

from bolz.oracle_graph import build_full_graph, oracle_shortest_path
from bolz.suffix_index import build_index
from bolz.window_trie import NONE, block_window, build_block_trie, compute_maximal_positions


def naive_lcp(s, a, b):
    h = 0
    while a + h < len(s) and b + h < len(s) and s[a + h] == s[b + h]:
        h += 1
    return h


def naive_greedy(s, model, max_distance=None):
    """Longest match, rightmost start on ties; returns (bits, phrases as (d, length))."""
    n = len(s)
    i = 0
    bits = 0
    phrases = []
    while i < n:
        best, best_d = 0, 0
        for p in range(i - 1, -1, -1):
            if max_distance and i - p > max_distance:
                break
            h = naive_lcp(s, p, i)
            if h > best:
                best, best_d = h, i - p
        if best == 0:
            bits += model.literal_cost
            phrases.append((0, 1))
            i += 1
        else:
            bits += model.copy_cost(best_d, best)
            phrases.append((best_d, best))
            i += best
    return bits, phrases


def oracle_bits(s, model, max_distance=None):
    return oracle_shortest_path(build_full_graph(s, model, max_distance)).total_bits


def random_text(rng: random.Random, n: int, sigma: int) -> bytes:
    if rng.random() < 0.3:
        # repetitive: a random seed repeated with mutations
        seed = [rng.randrange(sigma) for _ in range(rng.randint(1, 8))]
        out = [seed[k % len(seed)] if rng.random() > 0.1 else rng.randrange(sigma) for k in range(n)]
    else:
        out = [rng.randrange(sigma) for _ in range(n)]
    return bytes(97 + c for c in out)


def maximal_position_violations(s, model, leaf_order):
    """Count vertices where the trie sweep misses the best copy source of a class."""
    n = len(s)
    idx = build_index(s)
    table = model.distance_classes(n - 1)
    bad = 0
    checked = 0
    if table is None:
        return 0, 0
    for cls in table:
        size = cls.hi - cls.lo + 1
        for blo in range(0, n, size):
            bhi = min(blo + size - 1, n - 1)
            wlo, whi, _ = block_window(n, blo, bhi, cls.lo, cls.hi)
            trie = build_block_trie(idx, (blo, bhi), (wlo, whi), split=blo - cls.lo, leaf_order=leaf_order)
            mp = compute_maximal_positions(trie, (cls.lo, cls.hi))
            for h in range(blo, bhi + 1):
                window = range(max(h - cls.hi, 0), h - cls.lo + 1)
                closer = range(max(h - cls.lo + 1, 0), h)
                if not window:
                    bad += h in mp
                    continue
                best = max(naive_lcp(s, p, h) for p in window)
                prior = max((naive_lcp(s, p, h) for p in closer), default=0)
                if best > prior:
                    checked += 1
                    pos, length = mp.get(h, (NONE, 0))
                    if pos not in window or length != best or naive_lcp(s, pos, h) != best:
                        bad += 1
    return bad, checked
