"""Experiment runner.

Every analysis operation is exposed as a subcommand emitting CSV or JSON over
one fixed column set (see reports.CSV_COLUMNS).  Identical invocations give
byte-identical output; Monte Carlo randomness is fully determined by --seed.

Exit codes: 0 success, 1 usage or configuration error, 2 violated exact
invariant (the regression alarm, wired to the identity checks).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import analysis, reports
from .analysis import DEFAULT_ENUMERATION_LIMIT, IdentityCheckError
from .auctions import AUCTION_NAMES, expected_revenue_by_count
from .core import AuctionParams, BidVector, count_high, offline_optimal
from .exact import SurdSum

_BATCH_COMMANDS = ("sweep", "demo-dop", "dist-d", "mc", "block-check", "expectation")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors by default; the contract here is 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _h_value(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("must be >= 2")
    return value


def _seed_value(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("must fit in 64 bits")
    return value


def _add_output_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    sp.add_argument("--output", default=None, help="write to this file instead of stdout")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="bivalued-auctions",
        description="Worst-case and distributional experiments for two-price auctions.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("sweep", help="enumerate all bid vectors, profile additive loss")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--h", type=_h_value, required=True)
    sp.add_argument("--auction", choices=AUCTION_NAMES, required=True)
    sp.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    sp.add_argument("--limit", type=_positive_int, default=DEFAULT_ENUMERATION_LIMIT,
                    help="enumeration cap on n")
    _add_output_flags(sp)

    sp = sub.add_parser("demo-dop", help="exhibit the deterministic-offer failure ratio h")
    sp.add_argument("--h", type=_h_value, required=True)
    sp.add_argument("--n", type=_positive_int, default=None, help="defaults to h*h")
    _add_output_flags(sp)

    sp = sub.add_parser("dist-d", help="exact expectation identities under the hard distribution")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--h", type=_h_value, required=True)
    _add_output_flags(sp)

    sp = sub.add_parser("mc", help="Monte Carlo revenue estimates under the hard distribution")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--h", type=_h_value, required=True)
    sp.add_argument("--auction", choices=AUCTION_NAMES, required=True)
    sp.add_argument("--samples", type=_positive_int, required=True)
    sp.add_argument("--seed", type=_seed_value, required=True)
    sp.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    _add_output_flags(sp)

    sp = sub.add_parser("block-check", help="verify derandomized offer block structure on every vector")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--h", type=_h_value, required=True)
    sp.add_argument("--limit", type=_positive_int, default=DEFAULT_ENUMERATION_LIMIT)
    _add_output_flags(sp)

    sp = sub.add_parser("expectation", help="exact expected revenue of the randomized auction")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--h", type=_h_value, required=True)
    sp.add_argument("--bids", default=None,
                    help="H/L string for one vector; omit for the full per-count table")
    _add_output_flags(sp)

    sp = sub.add_parser("batch", help="run a JSON array of experiment configs, one aggregated report")
    sp.add_argument("config", help="path to a JSON array of config objects")
    sp.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    sp.add_argument("--limit", type=_positive_int, default=DEFAULT_ENUMERATION_LIMIT,
                    help="default enumeration cap for entries that do not set one")
    _add_output_flags(sp)

    return parser


# ---------------------------------------------------------------------------
# Command handlers: each returns report rows
# ---------------------------------------------------------------------------


def _normalized(loss, n: int, h: int) -> SurdSum:
    return SurdSum.of(loss) * SurdSum.multiple(Fraction(1, n * h), n * h)


def _sweep_rows(ns: argparse.Namespace) -> list[dict]:
    params = AuctionParams(ns.n, ns.h)
    profile = analysis.worst_case_sweep(params, ns.auction, limit=ns.limit, threads=ns.threads)
    witness = profile.witness
    opt = offline_optimal(witness)
    loss = profile.global_worst
    revenue = opt - loss if isinstance(loss, int) else SurdSum.of(opt) - loss
    row = reports.empty_row()
    row.update(
        command="sweep",
        n=ns.n,
        h=ns.h,
        auction=ns.auction,
        n_h=count_high(witness),
        opt=opt,
        revenue=revenue,
        loss=loss,
        normalized_loss=profile.normalized,
    )
    row["witness"] = witness.to_string()
    row["per_nh_worst"] = {
        str(k): (v if isinstance(v, int) else reports.surd_json(v))
        for k, v in sorted(profile.per_nh_worst.items())
    }
    return [row]


def _demo_dop_rows(ns: argparse.Namespace) -> list[dict]:
    ratio = analysis.dop_unboundedness_demo(ns.h, ns.n)
    n = ns.n if ns.n is not None else ns.h * ns.h
    t = n // ns.h
    row = reports.empty_row()
    row.update(
        command="demo-dop",
        n=n,
        h=ns.h,
        auction="dop",
        n_h=t,
        opt=n,
        revenue=t,
        loss=n - t,
        normalized_loss=_normalized(n - t, n, ns.h),
    )
    row["ratio"] = reports.fraction_json(ratio)
    return [row]


def _dist_d_rows(ns: argparse.Namespace) -> list[dict]:
    e_opt, e_dop, gap = analysis.check_distribution_identities(ns.n, ns.h)
    row = reports.empty_row()
    row.update(
        command="dist-d",
        n=ns.n,
        h=ns.h,
        auction="threshold-dop",
        n_h=ns.n // ns.h,
        opt=e_opt,
        revenue=e_dop,
        loss=gap,
        normalized_loss=_normalized(gap, ns.n, ns.h),
        gap_exact_num=gap.numerator,
        gap_exact_den=gap.denominator,
    )
    row["exact_e_opt"] = reports.fraction_json(e_opt)
    row["exact_e_dop"] = reports.fraction_json(e_dop)
    return [row]


def _mc_rows(ns: argparse.Namespace) -> list[dict]:
    report = analysis.monte_carlo_under_d(
        ns.n, ns.h, ns.auction, ns.samples, ns.seed, threads=ns.threads
    )
    auction_row = reports.empty_row()
    auction_row.update(
        command="mc",
        n=ns.n,
        h=ns.h,
        auction=ns.auction,
        samples=ns.samples,
        seed=ns.seed,
        mean=report.mc_mean_auction,
        stderr=report.mc_stderr_auction,
    )
    bench_row = reports.empty_row()
    bench_row.update(
        command="mc",
        n=ns.n,
        h=ns.h,
        auction="opt",
        samples=ns.samples,
        seed=ns.seed,
        mean=report.mc_mean_opt,
        stderr=report.mc_stderr_opt,
    )
    if report.gap is not None:
        for row in (auction_row, bench_row):
            row["gap_exact_num"] = report.gap.numerator
            row["gap_exact_den"] = report.gap.denominator
        auction_row["exact_e_dop"] = reports.fraction_json(report.exact_e_dop)
        bench_row["exact_e_opt"] = reports.fraction_json(report.exact_e_opt)
    return [auction_row, bench_row]


def _block_check_rows(ns: argparse.Namespace) -> list[dict]:
    params = AuctionParams(ns.n, ns.h)
    checked, failure = analysis.block_structure_sweep(params, limit=ns.limit)
    if failure is not None:
        b, violation = failure
        raise IdentityCheckError(
            "derand-block-structure",
            f"vector {b.to_string()}, {violation.bidder_class} block {violation.block_index}: "
            f"{violation.offered_high} h-offers, expected {violation.expected}",
        )
    row = reports.empty_row()
    row.update(command="block-check", n=ns.n, h=ns.h, auction="derand", samples=checked)
    return [row]


def _expectation_rows(ns: argparse.Namespace) -> list[dict]:
    params = AuctionParams(ns.n, ns.h)
    if ns.bids is not None:
        vector = BidVector.from_string(params, ns.bids)
        counts = [count_high(vector)]
    else:
        counts = list(range(ns.n + 1))
    rows = []
    for k in counts:
        opt = max(ns.n, ns.h * k)
        expectation = expected_revenue_by_count(ns.n, ns.h, k)
        loss = SurdSum.of(opt) - expectation
        row = reports.empty_row()
        row.update(
            command="expectation",
            n=ns.n,
            h=ns.h,
            auction="random",
            n_h=k,
            opt=opt,
            revenue=expectation,
            loss=loss,
            normalized_loss=_normalized(loss, ns.n, ns.h),
        )
        if ns.bids is not None:
            row["bids"] = ns.bids
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Batch mode
# ---------------------------------------------------------------------------

_BATCH_REQUIRED = {
    "sweep": ("n", "h", "auction"),
    "demo-dop": ("h",),
    "dist-d": ("n", "h"),
    "mc": ("n", "h", "auction", "samples", "seed"),
    "block-check": ("n", "h"),
    "expectation": ("n", "h"),
}
_BATCH_OPTIONAL = {
    "sweep": ("limit",),
    "demo-dop": ("n",),
    "dist-d": (),
    "mc": (),
    "block-check": ("limit",),
    "expectation": ("bids",),
}
# Per-entry output settings are meaningless in an aggregated report; tolerated
# so one config file can also drive single runs.
_BATCH_IGNORED = ("format", "output")

_INT_MINIMUM = {"n": 1, "h": 2, "samples": 1, "limit": 1, "seed": 0}


def _entry_int(index: int, entry: dict, key: str) -> int:
    value = entry[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"entry {index}: field {key!r} must be an integer")
    if value < _INT_MINIMUM[key]:
        raise ValueError(f"entry {index}: field {key!r} must be >= {_INT_MINIMUM[key]}")
    if key == "seed" and value >= 1 << 64:
        raise ValueError(f"entry {index}: field 'seed' must fit in 64 bits")
    return value


def _validate_entry(index: int, entry: object, args: argparse.Namespace) -> argparse.Namespace:
    if not isinstance(entry, dict):
        raise ValueError(f"entry {index}: must be an object")
    command = entry.get("command")
    if command not in _BATCH_COMMANDS:
        raise ValueError(
            f"entry {index}: field 'command' must be one of {', '.join(_BATCH_COMMANDS)}"
        )
    required = _BATCH_REQUIRED[command]
    optional = _BATCH_OPTIONAL[command]
    allowed = {"command", *required, *optional, *_BATCH_IGNORED}
    for key in entry:
        if key not in allowed:
            raise ValueError(f"entry {index}: unknown field {key!r} for command {command!r}")
    for key in required:
        if key not in entry:
            raise ValueError(f"entry {index}: missing field {key!r}")

    ns = argparse.Namespace(
        command=command,
        n=None,
        h=None,
        auction=None,
        samples=None,
        seed=None,
        bids=None,
        limit=args.limit,
        threads=args.threads,
    )
    for key in required + tuple(k for k in optional if k in entry):
        if key in ("n", "h", "samples", "seed", "limit"):
            setattr(ns, key, _entry_int(index, entry, key))
        elif key == "auction":
            value = entry[key]
            if value not in AUCTION_NAMES:
                raise ValueError(
                    f"entry {index}: field 'auction' must be one of {', '.join(AUCTION_NAMES)}"
                )
            ns.auction = value
        elif key == "bids":
            value = entry[key]
            if not isinstance(value, str):
                raise ValueError(f"entry {index}: field 'bids' must be a string")
            ns.bids = value

    needs_divisible = command in ("dist-d", "demo-dop") or (
        command in ("sweep", "mc") and ns.auction == "threshold-dop"
    )
    if needs_divisible and ns.n is not None and ns.n % ns.h != 0:
        raise ValueError(f"entry {index}: n={ns.n} must be divisible by h={ns.h}")
    return ns


def _batch_rows(args: argparse.Namespace) -> list[dict]:
    with open(args.config, encoding="utf-8") as fh:
        try:
            entries = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{args.config}: parse failure at line {exc.lineno}: {exc.msg}")
    if not isinstance(entries, list):
        raise ValueError(f"{args.config}: top level must be a JSON array")
    # Validate everything before running anything: one malformed entry must
    # fail the whole batch with no partial output.
    jobs = [_validate_entry(i, entry, args) for i, entry in enumerate(entries)]
    rows: list[dict] = []
    for ns in jobs:
        rows.extend(_HANDLERS[ns.command](ns))
    return rows


_HANDLERS = {
    "sweep": _sweep_rows,
    "demo-dop": _demo_dop_rows,
    "dist-d": _dist_d_rows,
    "mc": _mc_rows,
    "block-check": _block_check_rows,
    "expectation": _expectation_rows,
    "batch": _batch_rows,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows = _HANDLERS[args.command](args)
        text = reports.render(rows, args.format)
    except IdentityCheckError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        reports.write_report(text, args.output)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
