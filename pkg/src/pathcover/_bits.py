"""Bitmask helpers for vertex sets.

Vertex sets are represented as Python ints (bit i set = vertex i present),
which makes intersection, popcount and subset scans cheap even at n = 600.
"""

from __future__ import annotations

from typing import Iterable, Iterator

_MASK64 = (1 << 64) - 1


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def set_of(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


def nth_bit(mask: int, idx: int) -> int:
    """Position of the idx-th set bit (0-based). idx must be < popcount."""
    # Skip 64-bit chunks first so random picks stay fast on wide masks.
    offset = 0
    while mask:
        chunk = mask & _MASK64
        c = chunk.bit_count()
        if idx < c:
            for pos in bits(chunk):
                if idx == 0:
                    return offset + pos
                idx -= 1
        idx -= c
        mask >>= 64
        offset += 64
    raise IndexError("bit index out of range")


def mix64(*parts: int) -> int:
    """Deterministic seed derivation (splitmix64 chain over the parts).

    Used instead of hash() so derived seeds are stable across processes
    and Python versions.
    """
    z = 0x9E3779B97F4A7C15
    for p in parts:
        z = (z + (p & _MASK64) + 0x9E3779B97F4A7C15) & _MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z = z ^ (z >> 31)
    return z
