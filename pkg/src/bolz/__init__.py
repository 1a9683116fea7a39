"""Bit-optimal LZ77 compression."""
