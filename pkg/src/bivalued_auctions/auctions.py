"""The bid-independent auctions: DOP, its threshold variant, the randomized
two-price auction, and the deterministic modular derandomization.

Every offer rule here is a function of the other bids only.  The single
statistic that drives all of them is n_high(i), the number of high bids among
bidders other than i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import (
    LOW_VALUE,
    BidVector,
    MaskedBidVector,
    OfferSchedule,
    count_high,
    count_high_excluding,
    settle,
)
from .exact import SurdSum, bernoulli_threshold, ceil_scaled_sqrt
from .rng import draw_u64

AUCTION_NAMES = ("dop", "threshold-dop", "derand", "random")
DETERMINISTIC_AUCTIONS = ("dop", "threshold-dop", "derand")


def require_divisible(n: int, h: int) -> None:
    if n % h != 0:
        raise ValueError(f"h={h} must divide n={n}")


# ---------------------------------------------------------------------------
# DOP and its threshold variant
# ---------------------------------------------------------------------------


def dop_offer(m: MaskedBidVector) -> int:
    """Offer the revenue-maximizing fixed price for the other n-1 bids.

    Price h earns h * n_high(i) from the others, price 1 earns n - 1; ties go
    to h.
    """
    params = m.params
    nh_i = count_high_excluding(m)
    return params.h if params.h * nh_i >= params.n - 1 else LOW_VALUE


def threshold_dop_offer(m: MaskedBidVector) -> int:
    """Offer h iff at least n/h of the other bids are high (h must divide n)."""
    params = m.params
    require_divisible(params.n, params.h)
    return params.h if count_high_excluding(m) >= params.n // params.h else LOW_VALUE


# ---------------------------------------------------------------------------
# Randomized auction
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def offer_probability_by_count(n: int, h: int, nh_i: int) -> SurdSum:
    """Probability of offering h to a bidder who sees nh_i high bids.

    The raw value is (h * nh_i - n) / (h * sqrt(nh_i)), clamped into [0, 1].
    The sign check precedes any division, so nh_i = 0 is safe.
    """
    a = h * nh_i - n
    if a <= 0:
        return SurdSum.of(0)
    if a * a >= h * h * nh_i:
        return SurdSum.of(1)
    # a / (h * sqrt(nh_i)) == (a / (h * nh_i)) * sqrt(nh_i)
    return SurdSum.multiple(Fraction(a, h * nh_i), nh_i)


def random_offer_probability(m: MaskedBidVector) -> SurdSum:
    params = m.params
    return offer_probability_by_count(params.n, params.h, count_high_excluding(m))


@dataclass(frozen=True)
class OfferProbabilities:
    """The per-class offer probabilities (p_low_gets_one, p_high_gets_one, p_high_gets_h)."""

    p_low_gets_one: SurdSum
    p_high_gets_one: SurdSum
    p_high_gets_h: SurdSum

    def __post_init__(self) -> None:
        if not (self.p_high_gets_one + self.p_high_gets_h).is_rational or (
            self.p_high_gets_one + self.p_high_gets_h
        ).as_fraction() != 1:
            raise ValueError("high-bidder offer probabilities must sum to 1")
        for p in (self.p_low_gets_one, self.p_high_gets_one, self.p_high_gets_h):
            if p.sign() < 0 or p > 1:
                raise ValueError(f"probability {p!r} outside [0, 1]")

    @classmethod
    def from_counts(cls, n: int, h: int, n_high: int) -> "OfferProbabilities":
        """Class probabilities on a vector with n_high high bids (n_high >= 1)."""
        if n_high < 1:
            raise ValueError("a high-bidder class needs n_high >= 1")
        p_low_h = offer_probability_by_count(n, h, n_high)
        p_high_h = offer_probability_by_count(n, h, n_high - 1)
        return cls(
            p_low_gets_one=SurdSum.of(1) - p_low_h,
            p_high_gets_one=SurdSum.of(1) - p_high_h,
            p_high_gets_h=p_high_h,
        )


@lru_cache(maxsize=None)
def expected_revenue_by_count(n: int, h: int, n_high: int) -> SurdSum:
    """Exact expected revenue of the randomized auction on any vector with
    n_high high bids.

    By linearity: each of the n - n_high low bidders pays 1 unless offered h,
    each high bidder pays h when offered h and 1 otherwise.
    """
    p_low_h = offer_probability_by_count(n, h, n_high)
    total = (n - n_high) * (SurdSum.of(1) - p_low_h)
    if n_high > 0:
        p_high_h = offer_probability_by_count(n, h, n_high - 1)
        total = total + n_high * (h * p_high_h + (SurdSum.of(1) - p_high_h))
    return total


def random_auction_exact_expectation(b: BidVector) -> SurdSum:
    return expected_revenue_by_count(b.n, b.h, count_high(b))


@lru_cache(maxsize=None)
def _offer_threshold_by_count(n: int, h: int, nh_i: int) -> int:
    return bernoulli_threshold(offer_probability_by_count(n, h, nh_i))


def random_auction_run(b: BidVector, seed: int) -> OfferSchedule:
    """One sampled run: bidder i is offered h with probability p(i).

    The coin for bidder i is the keyed draw (seed, i) compared against an
    exact 64-bit threshold, so runs are reproducible and the per-bidder coins
    are independent of evaluation order.
    """
    n, h = b.n, b.h
    nh = count_high(b)
    offers = []
    for i in range(1, n + 1):
        threshold = _offer_threshold_by_count(n, h, nh - int(b.is_high(i)))
        offers.append(h if draw_u64(seed, i) < threshold else LOW_VALUE)
    return settle(b, offers)


# ---------------------------------------------------------------------------
# Derandomized auction
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def derand_modulus(h: int, nh_i: int) -> int:
    """ceil(h * sqrt(nh_i)), clamped to at least 1 so the modulus is valid."""
    return max(1, ceil_scaled_sqrt(h, nh_i))


@dataclass(frozen=True)
class DerandState:
    """Intermediate quantities of the modular offer rule for one bidder.

    a_val = h * n_high(i) - n; b_val = ceil(h * sqrt(n_high(i))) >= 1;
    x_val sums the indices of the other high bidders; y_val counts high
    bidders before i; z_val = (i + x_val + (b_val - 1) * y_val) mod b_val.
    """

    a_val: int
    b_val: int
    x_val: int
    y_val: int
    z_val: int

    def __post_init__(self) -> None:
        if self.b_val < 1:
            raise ValueError("modulus must be >= 1")
        if not 0 <= self.z_val < self.b_val:
            raise ValueError("z_val must be reduced into [0, b_val)")

    @property
    def offers_high(self) -> bool:
        return self.z_val < self.a_val


def derand_state(b: BidVector, i: int) -> DerandState:
    """Compute the offer-rule state for bidder i from the other bids only."""
    b._check_index(i)
    n, h = b.n, b.h
    nh_i = count_high(b) - int(b.is_high(i))
    x = sum(j for j in range(1, n + 1) if j != i and b.is_high(j))
    y = sum(1 for j in range(1, i) if b.is_high(j))
    b_val = derand_modulus(h, nh_i)
    z = (i + x + (b_val - 1) * y) % b_val
    return DerandState(a_val=h * nh_i - n, b_val=b_val, x_val=x, y_val=y, z_val=z)


def derand_offer(m: MaskedBidVector) -> int:
    """Deterministic offer: h iff z_val < a_val."""
    state = derand_state(m.base, m.masked_index)
    return m.params.h if state.offers_high else LOW_VALUE


def derand_run(b: BidVector) -> OfferSchedule:
    """Apply the derandomized rule to every bidder in O(n) total."""
    n, h = b.n, b.h
    nh = count_high(b)
    index_sum = sum(j for j in range(1, n + 1) if b.is_high(j))
    offers = []
    seen_high = 0  # high bidders with index < i
    for i in range(1, n + 1):
        high = b.is_high(i)
        nh_i = nh - int(high)
        a = h * nh_i - n
        b_val = derand_modulus(h, nh_i)
        x = index_sum - (i if high else 0)
        z = (i + x + (b_val - 1) * seen_high) % b_val
        offers.append(h if z < a else LOW_VALUE)
        seen_high += int(high)
    return settle(b, offers)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

_OFFER_RULES = {
    "dop": dop_offer,
    "threshold-dop": threshold_dop_offer,
    "derand": derand_offer,
}


def offer_rule(auction: str):
    """The per-bidder offer function of a named deterministic auction."""
    try:
        return _OFFER_RULES[auction]
    except KeyError:
        raise ValueError(
            f"unknown deterministic auction {auction!r}; expected one of {DETERMINISTIC_AUCTIONS}"
        ) from None


def run_auction(b: BidVector, auction: str) -> OfferSchedule:
    """Run a named deterministic auction on b."""
    if auction == "derand":
        return derand_run(b)
    rule = offer_rule(auction)
    return settle(b, [rule(b.mask_bidder(i)) for i in range(1, b.n + 1)])
