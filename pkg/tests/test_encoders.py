import random

import pytest
from hypothesis import given, strategies as st

from bolz.bitio import BitReader, BitWriter, CorruptStreamError
from bolz.encoders import (
    CostModel,
    EliasDelta,
    EliasGamma,
    Fibonacci,
    FixedWidth,
    code_from_id,
    code_from_name,
    code_id,
    codeword_len,
    cost_classes,
    decode_value,
    encode_value,
    kernel_class_end,
    kernel_code_length,
    num_classes,
)

ALL_CODES = [EliasGamma(), EliasDelta(), Fibonacci(), FixedWidth(16), FixedWidth(8)]


def brute_classes(code, lo, hi):
    out = []
    start = lo
    for x in range(lo + 1, hi + 2):
        if x == hi + 1 or code.length(x) != code.length(start):
            out.append(((start, x - 1), code.length(start)))
            start = x
    return out


def test_codeword_lengths_from_examples():
    assert codeword_len(EliasGamma(), 1) == 1
    assert codeword_len(EliasGamma(), 9) == 7
    assert codeword_len(Fibonacci(), 4) == 4
    assert codeword_len(FixedWidth(16), 12345) == 16


def test_codewords_from_examples():
    assert encode_value(EliasGamma(), 1) == "1"
    assert encode_value(EliasGamma(), 5) == "00101"
    assert encode_value(Fibonacci(), 3) == "0011"


def test_decode_examples():
    assert decode_value(EliasGamma(), BitReader.from_bits("1000")) == (1, 1)
    assert decode_value(EliasGamma(), BitReader.from_bits("00101111")) == (5, 5)
    assert decode_value(Fibonacci(), BitReader.from_bits("01100")) == (2, 3)


def test_known_small_codewords():
    # textbook tables
    assert [encode_value(EliasGamma(), x) for x in (2, 3, 4)] == ["010", "011", "00100"]
    assert [encode_value(EliasDelta(), x) for x in (1, 2, 3, 4, 8)] == ["1", "0100", "0101", "01100", "00100000"]
    assert [encode_value(Fibonacci(), x) for x in (1, 2, 4, 5, 6)] == ["11", "011", "1011", "00011", "10011"]


@pytest.mark.parametrize("code", ALL_CODES, ids=repr)
def test_round_trip_exhaustive_small(code):
    top = min(3000, code.max_value or 3000)
    w = BitWriter()
    for x in range(1, top + 1):
        code.write(w, x)
    r = BitReader(w.getvalue(), w.bit_count)
    for x in range(1, top + 1):
        assert decode_value(code, r) == (x, code.length(x))
    assert r.remaining == 0


@pytest.mark.parametrize("code", [EliasGamma(), EliasDelta(), Fibonacci(), FixedWidth(40)], ids=repr)
def test_round_trip_random_large(code):
    rng = random.Random(7)
    xs = [rng.randrange(1, 1 << rng.randint(1, 40)) for _ in range(100_000)]
    w = BitWriter()
    for x in xs:
        code.write(w, x)
    assert w.bit_count == sum(code.length(x) for x in xs)
    r = BitReader(w.getvalue(), w.bit_count)
    assert [code.read(r) for _ in xs] == xs


@given(st.integers(min_value=1, max_value=(1 << 62)))
def test_encode_length_matches_codeword_len(x):
    for code in (EliasGamma(), EliasDelta(), Fibonacci()):
        assert len(encode_value(code, x)) == code.length(x)


@pytest.mark.parametrize("code", ALL_CODES, ids=repr)
def test_lengths_non_decreasing(code):
    top = min(1 << 20, code.max_value or 1 << 20)
    prev = 0
    for x in range(1, top + 1):
        c = code.length(x)
        assert c >= prev
        prev = c


@given(st.integers(min_value=1, max_value=1 << 50), st.integers(min_value=0, max_value=1 << 20))
def test_increasing_cost_property_sampled(x, gap):
    for code in (EliasGamma(), EliasDelta(), Fibonacci()):
        assert code.length(x) <= code.length(x + gap)


def test_cost_classes_examples():
    assert cost_classes(EliasGamma(), 1, 10).as_tuples() == [((1, 1), 1), ((2, 3), 3), ((4, 7), 5), ((8, 10), 7)]
    assert cost_classes(FixedWidth(8), 1, 255).as_tuples() == [((1, 255), 8)]
    for n in (1, 2, 3, 100, 1023, 1024, 1 << 20):
        assert num_classes(EliasGamma(), n) == n.bit_length()


@pytest.mark.parametrize("code", ALL_CODES, ids=repr)
def test_cost_classes_match_brute_force_scan(code):
    hi = min(1 << 16, code.max_value or 1 << 16)
    assert cost_classes(code, 1, hi).as_tuples() == brute_classes(code, 1, hi)
    top = min(999, hi)
    assert cost_classes(code, 37, top).as_tuples() == brute_classes(code, 37, top)


def test_cost_classes_rejects_empty_domain():
    with pytest.raises(ValueError):
        cost_classes(EliasGamma(), 5, 4)
    with pytest.raises(ValueError):
        cost_classes(EliasGamma(), 0, 4)


@pytest.mark.parametrize("code", ALL_CODES, ids=repr)
def test_compiled_kernels_agree(code):
    for x in list(range(1, 5000)) + [1 << 30, (1 << 40) + 3]:
        if code.max_value and x > code.max_value:
            continue
        assert kernel_code_length(code.kind, code.width, x) == code.length(x)
        assert kernel_class_end(code.kind, code.width, x) == code.class_end(x)


def test_out_of_domain_values_rejected():
    with pytest.raises(ValueError):
        EliasGamma().length(0)
    with pytest.raises(ValueError):
        FixedWidth(8).length(256)


def test_truncated_and_malformed_codewords():
    with pytest.raises(CorruptStreamError):
        decode_value(EliasGamma(), BitReader.from_bits("0001"))
    with pytest.raises(CorruptStreamError):
        decode_value(Fibonacci(), BitReader.from_bits("0101"))
    with pytest.raises(CorruptStreamError):
        decode_value(FixedWidth(4), BitReader.from_bits("0000"))


def test_names_and_ids():
    assert code_from_name("gamma") == EliasGamma()
    assert code_from_name("fixed16") == FixedWidth(16)
    with pytest.raises(ValueError):
        code_from_name("huffman")
    for code in (EliasGamma(), EliasDelta(), Fibonacci(), FixedWidth(32)):
        assert code_from_id(code_id(code)) == code
    with pytest.raises(ValueError):
        code_id(FixedWidth(16))
    with pytest.raises(CorruptStreamError):
        code_from_id(9)


def test_cost_model_shifted_distances():
    m = CostModel()
    assert m.cost_distance(0) == 1
    assert m.literal_cost == 9
    assert m.copy_cost(1, 3) == 6
    assert m.distance_classes(100).as_tuples() == [
        ((1, 2), 3), ((3, 6), 5), ((7, 14), 7), ((15, 30), 9), ((31, 62), 11), ((63, 100), 13)]
    assert m.distance_classes(0) is None
    assert len(CostModel(FixedWidth(16), FixedWidth(16)).distance_classes(5000)) == 1
