"""Integer codes with the increasing cost property, and the phrase cost model.

Every code here maps positive integers to prefix-free codewords whose length
never decreases with the value. Besides encoding and decoding, each code knows
its codeword length in closed form and where its current length class ends,
which is what the parser needs to enumerate cost classes without scanning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numba as nb
import numpy as np

from .bitio import BitReader, BitWriter, CorruptStreamError

# kernel-side code kinds
KIND_FIXED = 0
KIND_GAMMA = 1
KIND_DELTA = 2
KIND_FIB = 3

# Fibonacci numbers 1, 2, 3, 5, ... large enough for 64-bit values
_FIB = [1, 2]
while _FIB[-1] < 1 << 64:
    _FIB.append(_FIB[-1] + _FIB[-2])
FIB_TABLE = np.array([v for v in _FIB if v < 1 << 63], dtype=np.int64)


class IntegerCode:
    """Base class for a prefix-free code over the positive integers."""

    kind: int = -1
    width: int = 0
    name: str = ""

    @property
    def max_value(self) -> int | None:
        return None

    def _check(self, x: int) -> None:
        if x < 1:
            raise ValueError(f"{self.name} cannot encode {x}: values must be >= 1")
        if self.max_value is not None and x > self.max_value:
            raise ValueError(f"{self.name} cannot encode {x}: exceeds {self.max_value}")

    def length(self, x: int) -> int:
        raise NotImplementedError

    def class_end(self, x: int) -> int:
        """Largest y >= x with the same codeword length as x."""
        raise NotImplementedError

    def write(self, writer: BitWriter, x: int) -> None:
        raise NotImplementedError

    def read(self, reader: BitReader) -> int:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.width == other.width  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.width))

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class FixedWidth(IntegerCode):
    kind = KIND_FIXED

    def __init__(self, width: int) -> None:
        if not 1 <= width <= 63:
            raise ValueError("fixed width must be in [1, 63]")
        self.width = width
        self.name = f"fixed{width}"

    def __repr__(self) -> str:
        return f"FixedWidth({self.width})"

    @property
    def max_value(self) -> int:
        return (1 << self.width) - 1

    def length(self, x: int) -> int:
        self._check(x)
        return self.width

    def class_end(self, x: int) -> int:
        self._check(x)
        return self.max_value

    def write(self, writer: BitWriter, x: int) -> None:
        self._check(x)
        writer.write(x, self.width)

    def read(self, reader: BitReader) -> int:
        x = reader.read(self.width)
        if x == 0:
            raise CorruptStreamError("fixed-width codeword 0 is not a valid value")
        return x


class EliasGamma(IntegerCode):
    kind = KIND_GAMMA
    name = "gamma"

    def length(self, x: int) -> int:
        self._check(x)
        return 2 * (x.bit_length() - 1) + 1

    def class_end(self, x: int) -> int:
        self._check(x)
        return (1 << x.bit_length()) - 1

    def write(self, writer: BitWriter, x: int) -> None:
        self._check(x)
        nb_ = x.bit_length()
        writer.write(0, nb_ - 1)
        writer.write(x, nb_)

    def read(self, reader: BitReader) -> int:
        zeros = reader.count_zeros()
        return (1 << zeros) | reader.read(zeros)


class EliasDelta(IntegerCode):
    kind = KIND_DELTA
    name = "delta"

    def length(self, x: int) -> int:
        self._check(x)
        nbits = x.bit_length()
        return (nbits - 1) + 2 * (nbits.bit_length() - 1) + 1

    def class_end(self, x: int) -> int:
        self._check(x)
        return (1 << x.bit_length()) - 1

    def write(self, writer: BitWriter, x: int) -> None:
        self._check(x)
        nbits = x.bit_length()
        EliasGamma().write(writer, nbits)
        writer.write(x, nbits - 1)

    def read(self, reader: BitReader) -> int:
        nbits = EliasGamma().read(reader)
        if nbits > 4096:
            raise CorruptStreamError("implausible Elias delta length prefix")
        return (1 << (nbits - 1)) | reader.read(nbits - 1)


class Fibonacci(IntegerCode):
    """Zeckendorf representation, low-order term first, closed by an extra 1."""

    kind = KIND_FIB
    name = "fib"

    @staticmethod
    def _top(x: int) -> int:
        k = 0
        while k + 1 < len(_FIB) and _FIB[k + 1] <= x:
            k += 1
        return k

    def length(self, x: int) -> int:
        self._check(x)
        return self._top(x) + 2

    def class_end(self, x: int) -> int:
        self._check(x)
        return _FIB[self._top(x) + 1] - 1

    def write(self, writer: BitWriter, x: int) -> None:
        self._check(x)
        k = self._top(x)
        bits = [0] * (k + 1)
        rest = x
        for t in range(k, -1, -1):
            if _FIB[t] <= rest:
                bits[t] = 1
                rest -= _FIB[t]
        for b in bits:
            writer.write(b, 1)
        writer.write(1, 1)

    def read(self, reader: BitReader) -> int:
        x = 0
        prev = 0
        t = 0
        while True:
            bit = reader.read_bit()
            if bit and prev:
                return x
            if bit:
                if t >= len(_FIB):
                    raise CorruptStreamError("Fibonacci codeword too long")
                x += _FIB[t]
            prev = bit
            t += 1


CODES_BY_NAME = {
    "gamma": EliasGamma,
    "delta": EliasDelta,
    "fib": Fibonacci,
    "fibonacci": Fibonacci,
}

# container header identifiers
CODE_IDS = {0: lambda: FixedWidth(32), 1: EliasGamma, 2: EliasDelta, 3: Fibonacci}


def code_from_name(name: str) -> IntegerCode:
    """Parse 'gamma', 'delta', 'fib' or 'fixedN' (e.g. 'fixed16')."""
    key = name.strip().lower()
    if key in CODES_BY_NAME:
        return CODES_BY_NAME[key]()
    if key.startswith("fixed") and key[5:].isdigit():
        return FixedWidth(int(key[5:]))
    raise ValueError(f"unknown integer code {name!r}")


def code_id(code: IntegerCode) -> int:
    if isinstance(code, FixedWidth):
        if code.width != 32:
            raise ValueError("the container only supports FixedWidth(32)")
        return 0
    return code.kind


def code_from_id(ident: int) -> IntegerCode:
    try:
        return CODE_IDS[ident]()
    except KeyError:
        raise CorruptStreamError(f"unknown code id {ident}") from None


def codeword_len(code: IntegerCode, x: int) -> int:
    return code.length(x)


def encode_value(code: IntegerCode, x: int) -> str:
    """Codeword of `x` as a '0'/'1' string."""
    w = BitWriter()
    code.write(w, x)
    data, n = w.getvalue(), w.bit_count
    return format(int.from_bytes(data, "big") >> (len(data) * 8 - n), f"0{n}b")


def decode_value(code: IntegerCode, reader: BitReader) -> tuple[int, int]:
    """Decode one codeword; returns (value, bits consumed)."""
    start = reader.pos
    x = code.read(reader)
    return x, reader.pos - start


@dataclass(frozen=True)
class CostClass:
    lo: int
    hi: int
    cost: int

    def __len__(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True)
class CostClassTable:
    classes: tuple[CostClass, ...]
    domain_max: int

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, k: int) -> CostClass:
        return self.classes[k]

    def as_tuples(self) -> list[tuple[tuple[int, int], int]]:
        return [((c.lo, c.hi), c.cost) for c in self.classes]


def cost_classes(code: IntegerCode, domain_lo: int, domain_hi: int) -> CostClassTable:
    """Split [domain_lo, domain_hi] into maximal runs of equal codeword length."""
    if domain_lo < 1 or domain_hi < domain_lo:
        raise ValueError(f"empty or invalid domain [{domain_lo}, {domain_hi}]")
    classes = []
    lo = domain_lo
    while lo <= domain_hi:
        hi = min(code.class_end(lo), domain_hi)
        classes.append(CostClass(lo, hi, code.length(lo)))
        lo = hi + 1
    return CostClassTable(tuple(classes), domain_hi)


def num_classes(code: IntegerCode, n: int) -> int:
    """Q(code, n): distinct codeword lengths over [1, n] (0 for n < 1)."""
    return len(cost_classes(code, 1, n)) if n >= 1 else 0


@dataclass(frozen=True)
class CostModel:
    """Bit costs of phrases: distances through `f`, lengths through `g`.

    Distances are shifted by one before encoding so that the literal marker
    d = 0 has a codeword.
    """

    f: IntegerCode = field(default_factory=EliasGamma)
    g: IntegerCode = field(default_factory=EliasGamma)
    literal_bits: int = 8

    def __post_init__(self) -> None:
        if not 1 <= self.literal_bits <= 32:
            raise ValueError("literal_bits must be in [1, 32]")

    def cost_distance(self, d: int) -> int:
        return self.f.length(d + 1)

    def cost_length(self, length: int) -> int:
        return self.g.length(length)

    @cached_property
    def literal_cost(self) -> int:
        return self.cost_distance(0) + self.literal_bits

    def copy_cost(self, d: int, length: int) -> int:
        return self.cost_distance(d) + self.cost_length(length)

    def distance_classes(self, max_d: int) -> CostClassTable | None:
        """Cost classes of copy distances in [1, max_d], expressed on d itself."""
        if max_d < 1:
            return None
        shifted = cost_classes(self.f, 2, max_d + 1)
        return CostClassTable(
            tuple(CostClass(c.lo - 1, c.hi - 1, c.cost) for c in shifted), max_d
        )

    def kernel_params(self) -> tuple[int, int, int, int, int]:
        """(f kind, f width, g kind, g width, literal bits) for the compiled kernels."""
        return self.f.kind, self.f.width, self.g.kind, self.g.width, self.literal_bits


@nb.njit(cache=True, inline="always")
def _bit_length(x):
    n = 0
    while x > 0:
        x >>= 1
        n += 1
    return n


@nb.njit(cache=True)
def kernel_code_length(kind, width, x):
    """Codeword length for the compiled paths (mirrors IntegerCode.length)."""
    if kind == KIND_FIXED:
        return width
    nbits = _bit_length(x)
    if kind == KIND_GAMMA:
        return 2 * nbits - 1
    if kind == KIND_DELTA:
        return (nbits - 1) + 2 * (_bit_length(nbits) - 1) + 1
    k = 0
    while k + 1 < FIB_TABLE.shape[0] and FIB_TABLE[k + 1] <= x:
        k += 1
    return k + 2


@nb.njit(cache=True)
def kernel_class_end(kind, width, x):
    """Largest y >= x sharing x's codeword length (capped to int64)."""
    if kind == KIND_FIXED:
        return (np.int64(1) << width) - 1
    if kind == KIND_GAMMA or kind == KIND_DELTA:
        return (np.int64(1) << _bit_length(x)) - 1
    k = 0
    while k + 1 < FIB_TABLE.shape[0] and FIB_TABLE[k + 1] <= x:
        k += 1
    if k + 1 < FIB_TABLE.shape[0]:
        return FIB_TABLE[k + 1] - 1
    return np.int64(9223372036854775807)
