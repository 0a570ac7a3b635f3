"""Certification machinery.

Exhaustive worst-case additive-loss sweeps, exact expectation identities
under the hard i.i.d. bid distribution (high with probability 1/h), Monte
Carlo estimates with per-chunk seed streams, and the block-structure verifier
for the derandomized offer rule.

All identity work is exact (Fraction / SurdSum); floating point only ever
appears in Monte Carlo summaries, which carry standard errors.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt
from typing import Optional, Union

import numpy as np

from . import enumeration
from .auctions import (
    AUCTION_NAMES,
    derand_modulus,
    derand_run,
    expected_revenue_by_count,
    _offer_threshold_by_count,
    require_divisible,
    run_auction,
)
from .core import AuctionParams, BidVector, count_high, offline_optimal
from .exact import SurdSum
from .rng import stream_generator

Loss = Union[int, SurdSum]

DEFAULT_ENUMERATION_LIMIT = 20
_MC_CHUNK = 1 << 14
_NEG_INF = np.int64(-(1 << 60))


class IdentityCheckError(Exception):
    """An exact identity that the library certifies failed to hold."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"identity violated: {invariant}" + (f" ({detail})" if detail else ""))


# ---------------------------------------------------------------------------
# Per-vector loss
# ---------------------------------------------------------------------------


def additive_loss(b: BidVector, auction: str) -> Loss:
    """Fixed-price benchmark minus the auction's (expected) revenue on b.

    Signed: a negative value means the auction beat the benchmark on this
    vector.  Deterministic auctions give an int, "random" its exact expected
    loss as a SurdSum.
    """
    if auction not in AUCTION_NAMES:
        raise ValueError(f"unknown auction {auction!r}; expected one of {AUCTION_NAMES}")
    if auction == "random":
        return SurdSum.of(offline_optimal(b)) - expected_revenue_by_count(
            b.n, b.h, count_high(b)
        )
    return offline_optimal(b) - run_auction(b, auction).revenue


# ---------------------------------------------------------------------------
# Exhaustive worst-case sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LossProfile:
    """Worst additive loss of one auction over every bid vector at (n, h)."""

    params: AuctionParams
    auction: str
    per_nh_worst: dict[int, Loss]
    global_worst: Loss
    witness: BidVector
    normalized: SurdSum  # global_worst / sqrt(n * h)


def _normalize(loss: Loss, n: int, h: int) -> SurdSum:
    return SurdSum.of(loss) * SurdSum.multiple(Fraction(1, n * h), n * h)


def _sweep_chunk(auction: str, n: int, h: int, lo: int, hi: int):
    masks = enumeration.mask_array(lo, hi)
    k = enumeration.popcount(masks)
    opt = np.maximum(n, h * k)
    losses = opt - enumeration.REVENUE_KERNELS[auction](masks, n, h)
    per_k = np.full(n + 1, _NEG_INF, dtype=np.int64)
    np.maximum.at(per_k, k, losses)
    worst = int(losses.max())
    at_worst = masks[losses == worst]
    keys = enumeration.lex_keys(at_worst, n)
    j = int(np.argmin(keys))
    return per_k, worst, int(keys[j]), int(at_worst[j])


def worst_case_sweep(
    params: AuctionParams,
    auction: str,
    *,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    threads: Optional[int] = None,
    chunk_bits: int = 16,
) -> LossProfile:
    """Enumerate all 2**n bid vectors and profile the additive loss.

    Deterministic auctions are evaluated with the vectorized kernels, in
    disjoint mask ranges reduced in a fixed order, so the result (including
    the lexicographically-least witness) does not depend on thread count.
    The randomized auction is profiled through its exact expected loss, which
    is constant on each high-count class.
    """
    n, h = params.n, params.h
    if auction not in AUCTION_NAMES:
        raise ValueError(f"unknown auction {auction!r}; expected one of {AUCTION_NAMES}")
    if n > limit:
        raise ValueError(f"n={n} exceeds enumeration limit {limit}")
    if auction == "threshold-dop":
        require_divisible(n, h)

    if auction == "random":
        per_nh: dict[int, Loss] = {
            k: SurdSum.of(max(n, h * k)) - expected_revenue_by_count(n, h, k)
            for k in range(n + 1)
        }
        worst_k = 0
        for k in range(1, n + 1):
            if per_nh[k] > per_nh[worst_k]:
                worst_k = k  # strict: ties keep the smaller count = lex-least witness
        global_worst = per_nh[worst_k]
        witness = BidVector(params, ((1 << worst_k) - 1) << (n - worst_k))
        return LossProfile(
            params, auction, per_nh, global_worst, witness, _normalize(global_worst, n, h)
        )

    total = 1 << n
    step = min(total, 1 << chunk_bits)
    ranges = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda r: _sweep_chunk(auction, n, h, *r), ranges))
    else:
        chunks = [_sweep_chunk(auction, n, h, lo, hi) for lo, hi in ranges]

    per_k_all = np.full(params.n + 1, _NEG_INF, dtype=np.int64)
    worst = None
    best_key = None
    best_mask = None
    for per_k, chunk_worst, chunk_key, chunk_mask in chunks:
        per_k_all = np.maximum(per_k_all, per_k)
        if worst is None or chunk_worst > worst or (chunk_worst == worst and chunk_key < best_key):
            worst, best_key, best_mask = chunk_worst, chunk_key, chunk_mask
    per_nh = {k: int(per_k_all[k]) for k in range(n + 1) if per_k_all[k] != _NEG_INF}
    witness = BidVector(params, best_mask)
    return LossProfile(params, auction, per_nh, worst, witness, _normalize(worst, n, h))


# ---------------------------------------------------------------------------
# The DOP failure mode
# ---------------------------------------------------------------------------


def dop_unboundedness_demo(h: int, n: Optional[int] = None) -> Fraction:
    """Benchmark-to-revenue ratio of DOP on a vector with exactly n/h high bids.

    Returns n / n_high = h: on this input DOP offers every high bidder 1 and
    every low bidder h, so only the high bidders pay, 1 each.
    """
    if n is None:
        n = h * h
    require_divisible(n, h)
    params = AuctionParams(n, h)
    n_high = n // h
    b = BidVector(params, ((1 << n_high) - 1) << (n - n_high))
    schedule = run_auction(b, "dop")
    return Fraction(offline_optimal(b), schedule.revenue)


# ---------------------------------------------------------------------------
# Block structure of the derandomized offers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockViolation:
    bidder_class: str  # "low" or "high"
    block_index: int
    positions: tuple[int, ...]
    offered_high: int
    expected: int
    partial: bool


@dataclass(frozen=True)
class BlockCheckResult:
    ok: bool
    violation: Optional[BlockViolation]


def block_structure_check(b: BidVector, offers: Optional[tuple[int, ...]] = None) -> BlockCheckResult:
    """Verify the combinatorial structure of the derandomized offers on b.

    Walking same-class bidders in index order steps the modular hash by +-1,
    so every full window of b_val consecutive same-class bidders must contain
    exactly clamp(a, 0, b_val) offers of h; a trailing partial window can
    only contain fewer.  `offers` overrides the computed schedule so the
    checker's sensitivity is itself testable.
    """
    if offers is None:
        offers = derand_run(b).offers
    n, h = b.n, b.h
    nh = count_high(b)
    lows = tuple(i for i in range(1, n + 1) if not b.is_high(i))
    highs = tuple(i for i in range(1, n + 1) if b.is_high(i))
    classes = [("low", lows, nh), ("high", highs, nh - 1)]
    for bidder_class, positions, nh_i in classes:
        if not positions:
            continue
        a = h * nh_i - n
        b_val = derand_modulus(h, nh_i)
        a_plus = min(max(a, 0), b_val)
        for block_index, start in enumerate(range(0, len(positions), b_val)):
            block = positions[start : start + b_val]
            got = sum(1 for p in block if offers[p - 1] == h)
            partial = len(block) < b_val
            bad = got > a_plus if partial else got != a_plus
            if bad:
                return BlockCheckResult(
                    False,
                    BlockViolation(bidder_class, block_index, block, got, a_plus, partial),
                )
    return BlockCheckResult(True, None)


def block_structure_sweep(
    params: AuctionParams, *, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> tuple[int, Optional[tuple[BidVector, BlockViolation]]]:
    """Run the block checker on every vector; (count checked, first failure)."""
    if params.n > limit:
        raise ValueError(f"n={params.n} exceeds enumeration limit {limit}")
    checked = 0
    for mask in range(1 << params.n):
        b = BidVector(params, mask)
        result = block_structure_check(b)
        checked += 1
        if not result.ok:
            return checked, (b, result.violation)
    return checked, None


# ---------------------------------------------------------------------------
# Bid-independence sweep
# ---------------------------------------------------------------------------


def bid_independence_violations(
    params: AuctionParams, auction: str, *, limit: int = 14
) -> list[tuple[int, BidVector]]:
    """Bidders whose own bid can change what they are offered, with a witness.

    Empty for a truthful auction.  Deterministic auctions compare realized
    offers across every single-bid flip; the randomized auction compares the
    statistic its offer distribution is a function of.
    """
    n, h = params.n, params.h
    if auction not in AUCTION_NAMES:
        raise ValueError(f"unknown auction {auction!r}; expected one of {AUCTION_NAMES}")
    if n > limit:
        raise ValueError(f"n={n} exceeds enumeration limit {limit}")
    masks = enumeration.mask_array(0, 1 << n)
    violations = []
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        if auction == "random":
            field = enumeration.popcount(masks) - ((masks >> (i - 1)) & 1)
        else:
            field = enumeration.offers_for_bidder(masks, n, h, i, auction)
        flipped = field[masks ^ bit]
        diff = field != flipped
        if diff.any():
            violations.append((i, BidVector(params, int(masks[diff][0]))))
    return violations


# ---------------------------------------------------------------------------
# Exact identities under the hard distribution
# ---------------------------------------------------------------------------


def _weights(n: int, h: int) -> list[Fraction]:
    p = Fraction(1, h)
    q = 1 - p
    return [comb(n, k) * p**k * q ** (n - k) for k in range(n + 1)]


def exact_e_opt_under_d(n: int, h: int) -> Fraction:
    """E[max(n, h*K)] for K ~ Binomial(n, 1/h), exactly (needs h | n)."""
    require_divisible(n, h)
    t = n // h
    w = _weights(n, h)
    below = sum((n * w[k] for k in range(t)), Fraction(0))
    above = sum((h * k * w[k] for k in range(t + 1, n + 1)), Fraction(0))
    return below + above + n * w[t]


def exact_e_dop_under_d(n: int, h: int) -> Fraction:
    """Expected revenue of threshold-DOP under the hard distribution.

    Identical to the benchmark expectation except on the boundary count
    K = n/h, where the auction collects only n/h; the bid-independence
    argument forces the total to equal n exactly.
    """
    require_divisible(n, h)
    t = n // h
    w = _weights(n, h)
    below = sum((n * w[k] for k in range(t)), Fraction(0))
    above = sum((h * k * w[k] for k in range(t + 1, n + 1)), Fraction(0))
    return below + above + t * w[t]


def lower_bound_gap(n: int, h: int) -> Fraction:
    """(n - n/h) * P[K = n/h]: the exact expected-loss floor at (n, h)."""
    require_divisible(n, h)
    t = n // h
    p = Fraction(1, h)
    return (n - t) * comb(n, t) * p**t * (1 - p) ** (n - t)


def check_distribution_identities(n: int, h: int) -> tuple[Fraction, Fraction, Fraction]:
    """Evaluate and cross-check the three exact quantities; raise on any break."""
    e_opt = exact_e_opt_under_d(n, h)
    e_dop = exact_e_dop_under_d(n, h)
    gap = lower_bound_gap(n, h)
    if e_dop != n:
        raise IdentityCheckError("expected-auction-revenue-equals-n", f"got {e_dop}")
    if e_opt - e_dop != gap:
        raise IdentityCheckError("gap-decomposition", f"{e_opt} - {e_dop} != {gap}")
    if not gap > 0:
        raise IdentityCheckError("gap-positive", f"got {gap}")
    return e_opt, e_dop, gap


# ---------------------------------------------------------------------------
# Monte Carlo under the hard distribution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistributionDReport:
    """Sampling estimates, with the exact identities attached when h | n."""

    n: int
    h: int
    auction: str
    samples: int
    seed: int
    mc_mean_auction: float
    mc_stderr_auction: float
    mc_mean_opt: float
    mc_stderr_opt: float
    exact_e_opt: Optional[Fraction]
    exact_e_dop: Optional[Fraction]
    gap: Optional[Fraction]


def _derand_revenues_matrix(high: np.ndarray, n: int, h: int) -> np.ndarray:
    rows = high.shape[0]
    k = high.sum(axis=1, dtype=np.int64)
    idx = np.arange(1, n + 1, dtype=np.int64)
    index_sum = (high * idx).sum(axis=1, dtype=np.int64)
    moduli = np.array([derand_modulus(h, m) for m in range(n + 1)], dtype=np.int64)
    revenue = np.zeros(rows, dtype=np.int64)
    seen_high = np.zeros(rows, dtype=np.int64)
    for i in range(1, n + 1):
        bit = high[:, i - 1].astype(np.int64)
        nh_i = k - bit
        a = h * nh_i - n
        b_val = moduli[nh_i]
        x = index_sum - i * bit
        z = (i + x + (b_val - 1) * seen_high) % b_val
        revenue += np.where(z < a, np.where(bit == 1, h, 0), 1)
        seen_high += bit
    return revenue


def _sample_revenues(
    rng: np.random.Generator, n: int, h: int, auction: str, rows: int
) -> tuple[np.ndarray, np.ndarray]:
    """Draw `rows` bid vectors (high w.p. 1/h) and settle the named auction."""
    high = rng.integers(0, h, size=(rows, n)) == 0
    k = high.sum(axis=1, dtype=np.int64)
    opt = np.maximum(n, h * k)
    if auction == "dop":
        revenue = (n - k) * np.where(h * k >= n - 1, 0, 1) + k * np.where(
            h * (k - 1) >= n - 1, h, 1
        )
    elif auction == "threshold-dop":
        t = n // h
        revenue = (n - k) * np.where(k >= t, 0, 1) + k * np.where(k - 1 >= t, h, 1)
    elif auction == "derand":
        revenue = _derand_revenues_matrix(high, n, h)
    elif auction == "random":
        thresholds = np.zeros(n + 1, dtype=np.uint64)
        always = np.zeros(n + 1, dtype=bool)
        for m in range(n + 1):
            t64 = _offer_threshold_by_count(n, h, m)
            if t64 >= 1 << 64:
                always[m] = True
            else:
                thresholds[m] = t64
        coins = rng.integers(0, 1 << 64, size=(rows, n), dtype=np.uint64, endpoint=False)
        nh_i = k[:, None] - high
        offered_h = (coins < thresholds[nh_i]) | always[nh_i]
        pay = np.where(offered_h, np.where(high, h, 0), 1)
        revenue = pay.sum(axis=1, dtype=np.int64)
    else:
        raise ValueError(f"unknown auction {auction!r}; expected one of {AUCTION_NAMES}")
    return revenue, opt


def _mean_stderr(total: int, total_sq: int, count: int) -> tuple[float, float]:
    mean = total / count
    if count < 2:
        return mean, 0.0
    var = (Fraction(total_sq) - Fraction(total * total, count)) / (count - 1)
    return mean, sqrt(max(float(var), 0.0) / count)


def monte_carlo_under_d(
    n: int,
    h: int,
    auction: str,
    samples: int,
    seed: int,
    *,
    threads: Optional[int] = None,
) -> DistributionDReport:
    """Sample the hard distribution and estimate mean revenues.

    Chunked into fixed-size blocks with one keyed Philox stream each, so the
    estimates are reproducible and independent of worker count.  Every
    bid-independent auction with offers in {1, h} earns exactly 1 per bidder
    in expectation here, so the auction mean must sit near n.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if auction not in AUCTION_NAMES:
        raise ValueError(f"unknown auction {auction!r}; expected one of {AUCTION_NAMES}")
    if auction == "threshold-dop":
        require_divisible(n, h)
    AuctionParams(n, h)  # validate

    sizes = []
    remaining = samples
    while remaining > 0:
        sizes.append(min(_MC_CHUNK, remaining))
        remaining -= _MC_CHUNK

    def one_chunk(args: tuple[int, int]) -> tuple[int, int, int, int]:
        stream, rows = args
        rng = stream_generator(seed, stream)
        revenue, opt = _sample_revenues(rng, n, h, auction, rows)
        return (
            int(revenue.sum(dtype=np.int64)),
            int((revenue * revenue).sum(dtype=np.int64)),
            int(opt.sum(dtype=np.int64)),
            int((opt * opt).sum(dtype=np.int64)),
        )

    jobs = list(enumerate(sizes))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one_chunk, jobs))
    else:
        parts = [one_chunk(job) for job in jobs]

    total = total_sq = opt_total = opt_sq = 0
    for rev_sum, rev_sq, o_sum, o_sq in parts:
        total += rev_sum
        total_sq += rev_sq
        opt_total += o_sum
        opt_sq += o_sq

    mean_auction, stderr_auction = _mean_stderr(total, total_sq, samples)
    mean_opt, stderr_opt = _mean_stderr(opt_total, opt_sq, samples)

    if n % h == 0:
        e_opt, e_dop, gap = check_distribution_identities(n, h)
    else:
        e_opt = e_dop = gap = None

    return DistributionDReport(
        n=n,
        h=h,
        auction=auction,
        samples=samples,
        seed=seed,
        mc_mean_auction=mean_auction,
        mc_stderr_auction=stderr_auction,
        mc_mean_opt=mean_opt,
        mc_stderr_opt=stderr_opt,
        exact_e_opt=e_opt,
        exact_e_dop=e_dop,
        gap=gap,
    )
