"""Keyed, splittable pseudo-random draws.

Per-bidder offer coins are drawn by a keyed hash of (seed, path), so each
coin is addressable and independent of evaluation order.  Bulk sampling gets
a Philox stream per fixed-size chunk, keyed the same way, which makes results
independent of how many workers the chunks are spread across.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _digest(seed: int, path: tuple[int, ...], size: int) -> bytes:
    key = (seed & _MASK64).to_bytes(8, "little")
    msg = b"".join((x & _MASK64).to_bytes(8, "little") for x in path)
    return hashlib.blake2b(msg, digest_size=size, key=key).digest()


def draw_u64(seed: int, *path: int) -> int:
    """A uniform 64-bit integer addressed by (seed, path)."""
    return int.from_bytes(_digest(seed, path, 8), "little")


def stream_generator(seed: int, stream: int) -> np.random.Generator:
    """A Philox generator for one bulk-sampling stream."""
    key = int.from_bytes(_digest(seed, (stream,), 16), "little")
    return np.random.Generator(np.random.Philox(key=key))
