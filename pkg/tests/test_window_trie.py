import itertools
import random

import numpy as np
import pytest

from bolz.encoders import CostModel, EliasDelta, EliasGamma, Fibonacci
from bolz.suffix_index import build_index
from bolz.window_trie import (
    RemapTable,
    block_window,
    build_block_trie,
    compute_maximal_positions,
    merge_sorted_suffix_lists,
    sort_range_suffixes,
)
from helpers import maximal_position_violations, naive_lcp


def remapped_key(s, remap, p):
    return [remap[c] for c in s[p:]]


def test_sort_range_example():
    idx = build_index("abab")
    assert sort_range_suffixes(idx, 0, 3) == [2, 0, 3, 1]
    assert sort_range_suffixes(idx, 2, 2) == [2]


def test_order_preserving_remap_gives_sa_restriction():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 120)
        s = bytes(rng.randrange(4) for _ in range(n))
        idx = build_index(s)
        lo = rng.randrange(n)
        hi = rng.randrange(lo, n)
        identity = RemapTable(np.arange(256, dtype=np.int64), 0)
        want = [int(p) for p in idx.sa if lo <= p <= hi]
        assert sort_range_suffixes(idx, lo, hi, identity) == want


def test_sort_range_matches_pairwise_remapped_order():
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randint(2, 60)
        s = bytes(rng.choice(b"xyzw"[: rng.randint(1, 4)]) for _ in range(n))
        idx = build_index(s)
        lo = rng.randrange(n)
        hi = rng.randrange(lo, n)
        remap = RemapTable.from_ranges(idx.text, [(lo, hi)])
        got = sort_range_suffixes(idx, lo, hi, remap)
        assert sorted(got) == list(range(lo, hi + 1))
        for p, q in itertools.combinations(got, 2):
            assert remapped_key(s, remap, p) < remapped_key(s, remap, q)


def test_merge_examples():
    idx = build_index("abracadabra")
    assert merge_sorted_suffix_lists(idx, [3, 1], []) == [3, 1]
    assert merge_sorted_suffix_lists(idx, [0], [1]) == [0, 1]
    remap = RemapTable.from_ranges(idx.text, [(2, 5), (6, 9)])
    first = sort_range_suffixes(idx, 2, 5, remap)
    second = sort_range_suffixes(idx, 6, 9, remap)
    assert merge_sorted_suffix_lists(idx, first, second, remap) == sort_range_suffixes(idx, 2, 9, remap)


def check_lca_depths(s, block, window, leaf_order):
    idx = build_index(s)
    trie = build_block_trie(idx, block, window, leaf_order=leaf_order)
    leaves = trie.leaves.tolist()
    want_leaves = set(range(block[0], block[1] + 1))
    lo, hi = max(window[0], 0), min(window[1], len(s) - 1)
    want_leaves |= set(range(lo, hi + 1))
    assert sorted(leaves) == sorted(want_leaves)
    for p, q in itertools.combinations(leaves, 2):
        u = trie.lca(trie.leaf_of(p), trie.leaf_of(q))
        assert trie.depth[u] == idx.lcp_query(p, q) == naive_lcp(s, p, q)
    return trie


@pytest.mark.parametrize("leaf_order", ["rank", "remap"])
def test_abracadabra_lca_depths(leaf_order):
    s = b"abracadabra"
    for blo in range(len(s)):
        for bhi in range(blo, min(blo + 4, len(s))):
            check_lca_depths(s, (blo, bhi), (blo - 4, bhi - 1), leaf_order)


@pytest.mark.parametrize("leaf_order", ["rank", "remap"])
def test_subtree_block_minimum(leaf_order):
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 64)
        s = bytes(rng.choice(b"ab") for _ in range(n))
        blo = rng.randrange(n)
        bhi = rng.randrange(blo, n)
        r = rng.randint(1, 20)
        trie = check_lca_depths(s, (blo, bhi), (blo - r, bhi - 1), leaf_order)
        for u in range(trie.node_count):
            below = [p for p in trie.subtree_leaves(u) if blo <= p <= bhi]
            assert trie.a[u] == (min(below) if below else np.iinfo(np.int64).max)


def test_single_leaf_trie():
    idx = build_index("abc")
    trie = build_block_trie(idx, (1, 1), (5, 4))
    assert trie.node_count == 1 and trie.a[0] == 1


def test_window_example():
    # h = 6 in "abcabcabc", window of distances [3, 6] -> positions 0..3
    s = b"abcabcabc"
    idx = build_index(s)
    blo, bhi = 6, 6
    wlo, whi, _ = block_window(len(s), blo, bhi, 3, 6)
    trie = build_block_trie(idx, (blo, bhi), (wlo, whi))
    mp = compute_maximal_positions(trie, (3, 6))
    pos, length = mp[6]
    assert pos in (0, 3) and length == 3


def test_empty_window_gives_no_candidate():
    idx = build_index("aaaa")
    trie = build_block_trie(idx, (0, 1), (-2, 0))
    mp = compute_maximal_positions(trie, (1, 2))
    assert 0 not in mp
    assert mp[1] == (0, 3)
    trie = build_block_trie(idx, (0, 0), (-2, -1))
    assert compute_maximal_positions(trie, (1, 2)) == {}


@pytest.mark.parametrize("leaf_order", ["rank", "remap"])
@pytest.mark.parametrize("f", [EliasGamma(), EliasDelta(), Fibonacci()], ids=repr)
def test_maximal_positions_match_brute_force(f, leaf_order):
    rng = random.Random(11)
    total = 0
    for _ in range(40):
        n = rng.randint(1, 100)
        s = bytes(rng.choice(b"abcd"[: rng.randint(1, 4)]) for _ in range(n))
        bad, checked = maximal_position_violations(s, CostModel(f), leaf_order)
        assert bad == 0, s
        total += checked
    assert total > 0
