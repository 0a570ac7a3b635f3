"""Vectorized evaluation of the auctions over ranges of bid masks.

A mask encodes one bid vector (bit i-1 set <=> bidder i bids high).  The
kernels below compute whole-revenue arrays for contiguous mask ranges so the
exhaustive sweeps stay seconds-scale at n = 20; they must agree bit-for-bit
with the per-bidder rules in auctions.py, which the test suite checks.
"""

from __future__ import annotations

import numpy as np

from .auctions import derand_modulus
from .core import LOW_VALUE


def mask_array(lo: int, hi: int) -> np.ndarray:
    return np.arange(lo, hi, dtype=np.int64)


def popcount(masks: np.ndarray) -> np.ndarray:
    return np.bitwise_count(masks.astype(np.uint64)).astype(np.int64)


def high_index_sum(masks: np.ndarray, n: int) -> np.ndarray:
    """sum of 1-based indices of high bidders, per mask."""
    total = np.zeros(masks.shape, dtype=np.int64)
    for i in range(1, n + 1):
        total += i * ((masks >> (i - 1)) & 1)
    return total


def lex_keys(masks: np.ndarray, n: int) -> np.ndarray:
    """Key whose numeric order is the lexicographic order of bid strings.

    Bid strings compare position 1 first with L < H, so position 1 becomes
    the most significant bit of the key.
    """
    keys = np.zeros(masks.shape, dtype=np.int64)
    for i in range(1, n + 1):
        keys |= (((masks >> (i - 1)) & 1)) << (n - i)
    return keys


def revenues_dop(masks: np.ndarray, n: int, h: int) -> np.ndarray:
    k = popcount(masks)
    low_pay = np.where(h * k >= n - 1, 0, 1)  # low bidders offered h pay 0
    high_pay = np.where(h * (k - 1) >= n - 1, h, 1)
    return (n - k) * low_pay + k * high_pay


def revenues_threshold_dop(masks: np.ndarray, n: int, h: int) -> np.ndarray:
    t = n // h
    k = popcount(masks)
    low_pay = np.where(k >= t, 0, 1)
    high_pay = np.where(k - 1 >= t, h, 1)
    return (n - k) * low_pay + k * high_pay


def revenues_derand(masks: np.ndarray, n: int, h: int) -> np.ndarray:
    k = popcount(masks)
    index_sum = high_index_sum(masks, n)
    moduli = np.array([derand_modulus(h, m) for m in range(n + 1)], dtype=np.int64)
    revenue = np.zeros(masks.shape, dtype=np.int64)
    seen_high = np.zeros(masks.shape, dtype=np.int64)
    for i in range(1, n + 1):
        bit = (masks >> (i - 1)) & 1
        nh_i = k - bit
        a = h * nh_i - n
        b_val = moduli[nh_i]
        x = index_sum - i * bit
        z = (i + x + (b_val - 1) * seen_high) % b_val
        offered_h = z < a
        revenue += np.where(offered_h, np.where(bit == 1, h, 0), 1)
        seen_high += bit
    return revenue


REVENUE_KERNELS = {
    "dop": revenues_dop,
    "threshold-dop": revenues_threshold_dop,
    "derand": revenues_derand,
}


def offers_for_bidder(masks: np.ndarray, n: int, h: int, i: int, auction: str) -> np.ndarray:
    """Offer made to bidder i on every mask, as values in {1, h}."""
    k = popcount(masks)
    bit = (masks >> (i - 1)) & 1
    nh_i = k - bit
    if auction == "dop":
        offered_h = h * nh_i >= n - 1
    elif auction == "threshold-dop":
        if n % h != 0:
            raise ValueError(f"h={h} must divide n={n}")
        offered_h = nh_i >= n // h
    elif auction == "derand":
        moduli = np.array([derand_modulus(h, m) for m in range(n + 1)], dtype=np.int64)
        a = h * nh_i - n
        b_val = moduli[nh_i]
        x = high_index_sum(masks, n) - i * bit
        below = masks & ((1 << (i - 1)) - 1)
        y = popcount(below)
        z = (i + x + (b_val - 1) * y) % b_val
        offered_h = z < a
    else:
        raise ValueError(f"unknown deterministic auction {auction!r}")
    return np.where(offered_h, h, LOW_VALUE)
