"""Naive reference implementations used as test oracles.

Everything here is written straight from the offer-rule definitions with
plain Python loops, sharing no code with the package internals: the package
computes revenues via bitmask kernels and incremental prefix counts, these
oracles recount from scratch per bidder.  Agreement between the two routes is
what the equivalence tests certify, so nothing below may import from
bivalued_auctions.
"""

from __future__ import annotations

from decimal import Decimal, getcontext
from fractions import Fraction


def opt_revenue(bids: list[int], h: int) -> int:
    n_high = sum(1 for v in bids if v == h)
    return max(len(bids), h * n_high)


def settle(bids: list[int], offers: list[int]) -> int:
    return sum(o for v, o in zip(bids, offers) if o <= v)


def others_high(bids: list[int], h: int, i1: int) -> int:
    return sum(1 for j, v in enumerate(bids, start=1) if j != i1 and v == h)


def dop_offers(bids: list[int], h: int) -> list[int]:
    n = len(bids)
    return [
        h if h * others_high(bids, h, i1) >= n - 1 else 1 for i1 in range(1, n + 1)
    ]


def threshold_dop_offers(bids: list[int], h: int) -> list[int]:
    n = len(bids)
    assert n % h == 0
    return [
        h if others_high(bids, h, i1) >= n // h else 1 for i1 in range(1, n + 1)
    ]


def ceil_mult_sqrt(mult: int, m: int) -> int:
    """Smallest integer t with t >= mult * sqrt(m), by counting up."""
    t = 0
    while t * t < mult * mult * m:
        t += 1
    return t


def derand_offers(bids: list[int], h: int) -> list[int]:
    n = len(bids)
    offers = []
    for i1 in range(1, n + 1):
        m = others_high(bids, h, i1)
        a = h * m - n
        b_val = max(1, ceil_mult_sqrt(h, m))
        x = sum(j for j, v in enumerate(bids, start=1) if j != i1 and v == h)
        y = sum(1 for j, v in enumerate(bids, start=1) if j < i1 and v == h)
        z = (i1 + x + (b_val - 1) * y) % b_val
        offers.append(h if z < a else 1)
    return offers


def d_weighted_expectation(n: int, h: int, revenue_of_bids) -> Fraction:
    """Exact E over all 2^n bid vectors, high with probability 1/h each."""
    p = Fraction(1, h)
    q = 1 - p
    total = Fraction(0)
    for mask in range(1 << n):
        bids = [h if mask >> j & 1 else 1 for j in range(n)]
        k = sum(1 for v in bids if v == h)
        total += p**k * q ** (n - k) * revenue_of_bids(bids)
    return total


def random_offer_probability_decimal(n: int, h: int, m: int, prec: int = 50) -> Decimal:
    getcontext().prec = prec
    numerator = h * m - n
    if numerator <= 0:
        return Decimal(0)
    value = Decimal(numerator) / (Decimal(h) * Decimal(m).sqrt())
    return min(value, Decimal(1))


def random_expected_revenue_decimal(n: int, h: int, k: int, prec: int = 50) -> Decimal:
    """High-precision decimal route to the randomized auction's expectation."""
    getcontext().prec = prec
    p_low = random_offer_probability_decimal(n, h, k, prec)
    p_high = random_offer_probability_decimal(n, h, k - 1, prec) if k >= 1 else Decimal(0)
    return (n - k) * (1 - p_low) + k * (h * p_high + (1 - p_high))
