import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bolz.encoders import CostModel, EliasDelta, EliasGamma, Fibonacci, FixedWidth
from bolz.experiments import generate_gap_family
from bolz.parser import (
    Copy,
    Literal,
    ParseError,
    Parsing,
    expand,
    greedy_parse,
    optimal_parse,
    parse_cost,
)
from helpers import naive_greedy, oracle_bits, random_text

GAMMA = CostModel()


def test_examples():
    assert optimal_parse("").total_bits == 0
    p = optimal_parse("aaaa", GAMMA)
    assert p.phrases == [Literal(97), Copy(1, 3)] and p.total_bits == 15
    assert greedy_parse("abab").phrases == [Literal(97), Literal(98), Copy(2, 2)]


def test_parse_cost_examples():
    assert parse_cost(Parsing([]), GAMMA) == 0
    assert parse_cost(Parsing([Literal(97)]), GAMMA) == 9
    assert parse_cost(Parsing([Literal(97), Copy(1, 3)]), GAMMA) == 15
    with pytest.raises(ParseError):
        parse_cost(Parsing([Literal(97), Copy(2, 1)]), GAMMA)


def test_expand_examples():
    assert expand(Parsing([Literal(97), Copy(1, 3)])) == b"aaaa"
    assert expand(Parsing([Literal(97), Literal(98), Copy(2, 4)])) == b"ababab"
    with pytest.raises(ParseError):
        expand(Parsing([Copy(1, 1)]))


@pytest.mark.parametrize("l", range(3, 9))
def test_greedy_on_gap_family_follows_the_published_parse(l):
    p = greedy_parse(generate_gap_family(l))
    want = [Literal(98), Literal(97), Copy(1, l - 1), Literal(99), Copy(1, 2 ** l - 1)]
    assert p.phrases[:5] == want
    tail = p.phrases[5:]
    assert len(tail) == l
    # (b a^i) for i = 1..l, each copied from the start of the text
    pos = 1 + l + 2 ** l
    for i, ph in enumerate(tail, start=1):
        assert ph == Copy(pos, i + 1)
        pos += i + 1


@pytest.mark.parametrize("model", [GAMMA, CostModel(EliasDelta(), EliasGamma()), CostModel(Fibonacci(), Fibonacci()),
                                   CostModel(FixedWidth(16), FixedWidth(16))], ids=["gg", "dg", "ff", "xx"])
def test_optimal_matches_oracle_and_greedy_matches_naive(model):
    rng = random.Random(21)
    for _ in range(80):
        s = random_text(rng, rng.randint(1, 90), rng.choice([2, 4, 26]))
        w = rng.choice([None, 4, 30])
        opt = optimal_parse(s, model, w)
        assert opt.total_bits == oracle_bits(s, model, w)
        assert parse_cost(opt, model) == opt.total_bits
        assert expand(opt) == s
        greedy = greedy_parse(s, model, w)
        bits, phrases = naive_greedy(s, model, w)
        assert greedy.total_bits == bits
        assert [(0, 1) if isinstance(p, Literal) else (p.d, p.length) for p in greedy.phrases] == phrases
        assert opt.total_bits <= greedy.total_bits


def test_leaf_orders_agree():
    rng = random.Random(8)
    for _ in range(50):
        s = random_text(rng, rng.randint(1, 150), rng.choice([2, 26]))
        a = optimal_parse(s, leaf_order="rank")
        b = optimal_parse(s, leaf_order="remap")
        assert a.total_bits == b.total_bits


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=300))
def test_round_trip_and_dominance(data):
    opt = optimal_parse(data)
    greedy = greedy_parse(data)
    assert expand(opt) == data == expand(greedy)
    assert opt.total_bits <= greedy.total_bits


def test_edge_counts_recorded():
    s = b"abracadabra" * 5
    counts = np.zeros(len(s), dtype=np.int32)
    optimal_parse(s, edge_counts=counts)
    assert counts[0] == 0 and counts.max() >= 1


def test_large_alphabet_input():
    xs = [1000, 2000, 1000, 2000, 1000]
    p = optimal_parse(xs)
    assert p.text_length == 5 and isinstance(p.phrases[-1], Copy)
