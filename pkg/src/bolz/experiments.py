"""Gap family where greedy LZ77 loses a growing factor to the optimal parse, plus timing helpers."""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import astuple, dataclass

from .encoders import CostModel
from .parser import Copy, Literal, Parsing, greedy_parse, optimal_parse, parse_cost
from .suffix_index import build_index

CSV_HEADER = ["l", "n", "greedy_bits", "optimal_bits", "ratio", "greedy_phrases", "optimal_phrases"]
MAX_L = 24


def gap_family_length(l: int) -> int:
    return 1 + 2 * l + 2 ** l + l * (l + 1) // 2


def generate_gap_family(l: int) -> bytes:
    """b a^l c^(2^l) (ba)(ba^2)...(ba^l)."""
    if not isinstance(l, int) or not 1 <= l <= MAX_L:
        raise ValueError(f"l must be an integer in [1, {MAX_L}], got {l!r}")
    tail = b"".join(b"b" + b"a" * i for i in range(1, l + 1))
    return b"b" + b"a" * l + b"c" * (2 ** l) + tail


def reference_gap_parsing(l: int) -> list:
    """The hand-built parse that copies each ba^(i-1) from the block right before it.

    Any valid parse bounds the optimum from above, so its cost caps optimal_bits.
    """
    phrases = [Literal(ord("b")), Literal(ord("a"))]
    if l > 1:
        phrases.append(Copy(1, l - 1))
    phrases += [Literal(ord("c")), Copy(1, 2 ** l - 1), Literal(ord("b")), Literal(ord("a"))]
    for i in range(2, l + 1):
        phrases += [Copy(i, i), Copy(1, 1)]
    return phrases


def reference_gap_cost(l: int, model: CostModel) -> int:
    return parse_cost(Parsing(reference_gap_parsing(l)), model)


@dataclass(frozen=True)
class GapReportRow:
    l: int
    n: int
    greedy_bits: int
    optimal_bits: int
    ratio: float
    greedy_phrases: int
    optimal_phrases: int


def gap_row(l: int, model: CostModel) -> GapReportRow:
    s = generate_gap_family(l)
    idx = build_index(s)
    greedy = greedy_parse(s, model, index=idx)
    opt = optimal_parse(s, model, index=idx)
    return GapReportRow(l, len(s), greedy.total_bits, opt.total_bits,
                        greedy.total_bits / opt.total_bits, len(greedy), len(opt))


def run_gap_experiment(l_range, model: CostModel | None = None) -> list[GapReportRow]:
    model = model or CostModel()
    return [gap_row(l, model) for l in l_range]


def rows_to_csv(rows: list[GapReportRow], out=None) -> str:
    buf = out if out is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        vals = list(astuple(r))
        vals[4] = f"{r.ratio:.6f}"
        w.writerow(vals)
    return buf.getvalue() if out is None else ""


def mixed_text(n: int, seed: int = 0) -> bytes:
    """Deterministic text-like bytes: words from a Zipf-ish vocabulary plus occasional repeats."""
    import random

    rng = random.Random(seed)
    letters = "etaoinshrdlcumwfgypbvkjxqz"
    vocab = ["".join(rng.choice(letters[: rng.randint(6, 26)]) for _ in range(rng.randint(1, 9)))
             for _ in range(4000)]
    weights = [1.0 / (k + 1) for k in range(len(vocab))]
    out = bytearray()
    while len(out) < n:
        if out and rng.random() < 0.02:
            start = rng.randrange(len(out))
            out += out[start:start + rng.randint(8, 200)]
        else:
            out += " ".join(rng.choices(vocab, weights, k=16)).encode() + b". "
    return bytes(out[:n])


def time_call(fn, repeats: int = 5) -> float:
    """Median wall-clock seconds over `repeats` calls."""
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)
