"""Command-line interface: compress, decompress, stats, gapfamily, bench."""

from __future__ import annotations

import argparse
import sys
from collections import Counter

import numpy as np

from .bitio import CorruptStreamError
from .codec import CodecConfig, compress, decompress
from .encoders import CostModel, code_from_name, num_classes
from .experiments import mixed_text, rows_to_csv, run_gap_experiment, time_call
from .fsg import class_passes
from .oracle_graph import build_full_graph, to_dot
from .parser import greedy_parse, optimal_parse
from .suffix_index import build_index

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
DOT_LIMIT = 256


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--f-code", default="gamma", help="distance code: gamma, delta, fib or fixedN")
    p.add_argument("--g-code", default="gamma", help="length code: gamma, delta, fib or fixedN")
    p.add_argument("--literal-bits", type=int, default=8)
    p.add_argument("--window", type=int, default=0, help="max copy distance (0 = unbounded)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bolz", description="Bit-optimal LZ77 compressor")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("compress", help="compress a file")
    c.add_argument("input")
    c.add_argument("-o", "--output", required=True)
    c.add_argument("--parser", choices=["optimal", "greedy"], default="optimal")
    _add_model_flags(c)

    d = sub.add_parser("decompress", help="decompress a .bolz file")
    d.add_argument("input")
    d.add_argument("-o", "--output", required=True)

    s = sub.add_parser("stats", help="edge statistics and greedy vs optimal bits")
    s.add_argument("input")
    s.add_argument("--dot", metavar="FILE", help=f"write the maximal-edge graph as DOT (n <= {DOT_LIMIT})")
    _add_model_flags(s)

    g = sub.add_parser("gapfamily", help="greedy/optimal ratio on the gap family")
    g.add_argument("--lmin", type=int, default=1)
    g.add_argument("--lmax", type=int, default=16)
    g.add_argument("--csv", metavar="FILE", help="write CSV here instead of stdout")
    _add_model_flags(g)

    b = sub.add_parser("bench", help="median wall time of optimal parsing vs n")
    b.add_argument("--sizes", type=int, nargs="+", default=[1 << 16, 1 << 17, 1 << 18])
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--input", help="take prefixes of this file instead of generated text")
    _add_model_flags(b)
    return ap


def _model(args) -> CostModel:
    try:
        return CostModel(code_from_name(args.f_code), code_from_name(args.g_code), args.literal_bits)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write(path: str, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def cmd_compress(args) -> int:
    model = _model(args)
    cfg = CodecConfig(model.f, model.g, model.literal_bits, args.window, args.parser)
    _write(args.output, compress(_read(args.input), cfg))
    return EXIT_OK


def cmd_decompress(args) -> int:
    _write(args.output, decompress(_read(args.input)))
    return EXIT_OK


def cmd_stats(args, out) -> int:
    model = _model(args)
    data = _read(args.input)
    n = len(data)
    maxd = args.window or None
    print(f"n = {n}", file=out)
    if n == 0:
        return EXIT_OK
    idx = build_index(data)
    counts = np.zeros(n, dtype=np.int32)
    opt = optimal_parse(data, model, maxd, index=idx, edge_counts=counts)
    greedy = greedy_parse(data, model, maxd, index=idx)
    qf = len(class_passes(model, n, maxd))
    qg = num_classes(model.g, n)
    print(f"Q(f) = {qf}  Q(g) = {qg}  bound = {qf + qg}", file=out)
    print(f"max copy edges per vertex = {int(counts.max())}", file=out)
    print("copy edges per vertex histogram:", file=out)
    for k, v in sorted(Counter(counts.tolist()).items()):
        print(f"  {k}: {v}", file=out)
    print(f"greedy bits = {greedy.total_bits}  phrases = {len(greedy)}", file=out)
    print(f"optimal bits = {opt.total_bits}  phrases = {len(opt)}", file=out)
    print(f"ratio = {greedy.total_bits / opt.total_bits:.6f}", file=out)
    if args.dot:
        if n > DOT_LIMIT:
            raise UsageError(f"--dot needs n <= {DOT_LIMIT}")
        with open(args.dot, "w") as fh:
            fh.write(to_dot(build_full_graph(data, model, maxd), maximal_only=True))
    return EXIT_OK


def cmd_gapfamily(args, out) -> int:
    if not 1 <= args.lmin <= args.lmax <= 24:
        raise UsageError("need 1 <= lmin <= lmax <= 24")
    rows = run_gap_experiment(range(args.lmin, args.lmax + 1), _model(args))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            rows_to_csv(rows, fh)
    else:
        out.write(rows_to_csv(rows))
    return EXIT_OK


def cmd_bench(args, out) -> int:
    model = _model(args)
    source = _read(args.input) if args.input else None
    optimal_parse(b"warm up the compiled kernels", model)
    print("n,seconds,bits", file=out)
    for n in args.sizes:
        data = source[:n] if source is not None else mixed_text(n)
        bits = []
        t = time_call(lambda: bits.append(optimal_parse(data, model, args.window or None).total_bits),
                      args.repeats)
        print(f"{len(data)},{t:.4f},{bits[-1]}", file=out)
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.cmd == "compress":
            return cmd_compress(args)
        if args.cmd == "decompress":
            return cmd_decompress(args)
        if args.cmd == "stats":
            return cmd_stats(args, out)
        if args.cmd == "gapfamily":
            return cmd_gapfamily(args, out)
        return cmd_bench(args, out)
    except UsageError as exc:
        print(f"bolz: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorruptStreamError, ValueError, OSError) as exc:
        print(f"bolz: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
