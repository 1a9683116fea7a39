"""MSB-first bit writer and reader."""

from __future__ import annotations


class CorruptStreamError(ValueError):
    """Raised when a bit stream or container cannot be decoded."""


class BitWriter:
    """Accumulates bits MSB-first into a bytearray."""

    def __init__(self) -> None:
        self._out = bytearray()
        self._acc = 0
        self._nacc = 0
        self.bit_count = 0

    def write(self, value: int, nbits: int) -> None:
        if nbits == 0:
            return
        self._acc = (self._acc << nbits) | (value & ((1 << nbits) - 1))
        self._nacc += nbits
        self.bit_count += nbits
        if self._nacc >= 64:
            keep = self._nacc & 7
            nbytes = self._nacc >> 3
            self._out += (self._acc >> keep).to_bytes(nbytes, "big")
            self._acc &= (1 << keep) - 1
            self._nacc = keep

    def write_bits(self, bits: str) -> None:
        if bits:
            self.write(int(bits, 2), len(bits))

    def getvalue(self) -> bytes:
        """Return the written bits, zero-padding the final partial byte."""
        out = bytearray(self._out)
        if self._nacc:
            pad = (-self._nacc) % 8
            out += (self._acc << pad).to_bytes((self._nacc + pad) // 8, "big")
        return bytes(out)


class BitReader:
    """Reads bits MSB-first from a byte buffer, optionally limited to `nbits`."""

    def __init__(self, data: bytes, nbits: int | None = None, offset_bits: int = 0) -> None:
        self._data = data
        self._limit = len(data) * 8 if nbits is None else min(nbits, len(data) * 8)
        self.pos = offset_bits

    @classmethod
    def from_bits(cls, bits: str) -> "BitReader":
        """Reader over a '0'/'1' string (handy for tests)."""
        if not bits:
            return cls(b"", 0)
        pad = (-len(bits)) % 8
        data = int(bits + "0" * pad, 2).to_bytes((len(bits) + pad) // 8, "big")
        return cls(data, len(bits))

    @property
    def remaining(self) -> int:
        return self._limit - self.pos

    def read_bit(self) -> int:
        if self.pos >= self._limit:
            raise CorruptStreamError("truncated bit stream")
        byte = self._data[self.pos >> 3]
        bit = (byte >> (7 - (self.pos & 7))) & 1
        self.pos += 1
        return bit

    def read(self, nbits: int) -> int:
        if nbits == 0:
            return 0
        if self.pos + nbits > self._limit:
            raise CorruptStreamError("truncated bit stream")
        start = self.pos >> 3
        end = (self.pos + nbits + 7) >> 3
        chunk = int.from_bytes(self._data[start:end], "big")
        tail = end * 8 - (self.pos + nbits)
        self.pos += nbits
        return (chunk >> tail) & ((1 << nbits) - 1)

    def count_zeros(self) -> int:
        """Consume a run of 0 bits and the terminating 1; return the run length."""
        zeros = 0
        while self.read_bit() == 0:
            zeros += 1
        return zeros
