"""Container format: a fixed header followed by the phrase bit stream.

See FORMAT.md for the byte layout.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .bitio import BitReader, BitWriter, CorruptStreamError
from .encoders import CostModel, EliasGamma, IntegerCode, code_from_id, code_id
from .parser import Copy, Literal, Parsing, greedy_parse, optimal_parse
from .suffix_index import as_symbols

MAGIC = b"BOLZ"
VERSION = 1
_HEADER = struct.Struct("<4sBBBBQQ")
HEADER_SIZE = _HEADER.size  # 24


class BadHeaderError(CorruptStreamError):
    pass


class TruncatedStreamError(CorruptStreamError):
    pass


class BadCopyError(CorruptStreamError):
    pass


class OverrunError(CorruptStreamError):
    pass


class BadPaddingError(CorruptStreamError):
    pass


@dataclass(frozen=True)
class ContainerHeader:
    f: IntegerCode
    g: IntegerCode
    literal_bits: int
    max_distance: int
    n: int

    def pack(self) -> bytes:
        return _HEADER.pack(MAGIC, VERSION, code_id(self.f), code_id(self.g), self.literal_bits,
                            self.max_distance, self.n)

    @classmethod
    def unpack(cls, data: bytes) -> "ContainerHeader":
        if len(data) < HEADER_SIZE:
            raise BadHeaderError(f"stream shorter than the {HEADER_SIZE}-byte header")
        magic, version, fid, gid, lit, maxd, n = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise BadHeaderError(f"bad magic {magic!r}")
        if version != VERSION:
            raise BadHeaderError(f"unsupported version {version}")
        try:
            f, g = code_from_id(fid), code_from_id(gid)
        except CorruptStreamError as exc:
            raise BadHeaderError(str(exc)) from None
        if not 1 <= lit <= 32:
            raise BadHeaderError(f"literal width {lit} out of range")
        return cls(f, g, lit, maxd, n)


@dataclass(frozen=True)
class CodecConfig:
    f: IntegerCode = EliasGamma()
    g: IntegerCode = EliasGamma()
    literal_bits: int = 8
    max_distance: int = 0
    parser: str = "optimal"

    @property
    def model(self) -> CostModel:
        return CostModel(self.f, self.g, self.literal_bits)


def write_phrases(parsing: Parsing, model: CostModel, writer: BitWriter) -> None:
    lit = model.literal_bits
    for ph in parsing.phrases:
        if isinstance(ph, Literal):
            if ph.symbol >> lit:
                raise ValueError(f"symbol {ph.symbol} does not fit in {lit} literal bits")
            model.f.write(writer, 1)
            writer.write(ph.symbol, lit)
        else:
            model.f.write(writer, ph.d + 1)
            model.g.write(writer, ph.length)


def parse_for(data: bytes, config: CodecConfig) -> Parsing:
    model = config.model
    maxd = config.max_distance or None
    if config.parser == "optimal":
        return optimal_parse(data, model, maxd)
    if config.parser == "greedy":
        return greedy_parse(data, model, maxd)
    raise ValueError(f"unknown parser {config.parser!r}")


def compress_parsing(data: bytes, parsing: Parsing, config: CodecConfig) -> bytes:
    header = ContainerHeader(config.f, config.g, config.literal_bits, config.max_distance, len(data))
    writer = BitWriter()
    write_phrases(parsing, config.model, writer)
    if writer.bit_count != parsing.total_bits:
        raise AssertionError(f"wrote {writer.bit_count} bits, parser reported {parsing.total_bits}")
    return header.pack() + writer.getvalue()


def compress(data, config: CodecConfig | None = None, **kwargs) -> bytes:
    """Parse `data` and serialize it. Keyword arguments override CodecConfig fields."""
    config = config or CodecConfig(**kwargs)
    data = bytes(as_symbols(data).astype("uint8")) if not isinstance(data, (bytes, bytearray)) else bytes(data)
    return compress_parsing(data, parse_for(data, config), config)


def payload_bits(data, config: CodecConfig | None = None, **kwargs) -> tuple[int, int]:
    """(payload bits written, parser-reported bits) for `data`."""
    config = config or CodecConfig(**kwargs)
    data = bytes(data)
    parsing = parse_for(data, config)
    writer = BitWriter()
    write_phrases(parsing, config.model, writer)
    return writer.bit_count, parsing.total_bits


def decode_phrases(stream: bytes) -> tuple[ContainerHeader, Parsing]:
    """Decode the header and phrase list, validating every copy and the padding."""
    header = ContainerHeader.unpack(stream)
    reader = BitReader(stream, offset_bits=HEADER_SIZE * 8)
    f, g, lit, n = header.f, header.g, header.literal_bits, header.n
    phrases = []
    produced = 0
    bits = 0
    try:
        while produced < n:
            start = reader.pos
            code = f.read(reader)
            if code == 1:
                phrases.append(Literal(reader.read(lit)))
                produced += 1
            else:
                d = code - 1
                length = g.read(reader)
                if d > produced:
                    raise BadCopyError(f"copy distance {d} at position {produced} reaches before the start")
                if produced + length > n:
                    raise OverrunError(f"copy of length {length} at {produced} runs past n = {n}")
                phrases.append(Copy(d, length))
                produced += length
            bits += reader.pos - start
    except CorruptStreamError as exc:
        if isinstance(exc, (BadCopyError, OverrunError)):
            raise
        raise TruncatedStreamError(f"truncated payload: {exc}") from None
    tail = len(stream) * 8 - reader.pos
    if tail >= 8:
        raise BadPaddingError(f"{tail // 8} trailing bytes after the payload")
    if tail and reader.read(tail) != 0:
        raise BadPaddingError("non-zero padding bits")
    return header, Parsing(phrases, bits)


def decompress(stream: bytes) -> bytes:
    _, parsing = decode_phrases(bytes(stream))
    out = bytearray()
    for ph in parsing.phrases:
        if isinstance(ph, Literal):
            out.append(ph.symbol & 0xFF if ph.symbol < 256 else _bad_symbol(ph.symbol))
        else:
            start = len(out) - ph.d
            if ph.d >= ph.length:
                out += out[start:start + ph.length]
            else:
                for k in range(ph.length):
                    out.append(out[start + k])
    return bytes(out)


def _bad_symbol(sym: int) -> int:
    raise CorruptStreamError(f"literal {sym} is not a byte")
