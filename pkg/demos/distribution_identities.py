# Exact arithmetic under the i.i.d. distribution that makes every
# bid-independent auction earn n in expectation.  The gap between E[OPT]
# and n is the lower-bound term; its normalized value sits in a narrow band.

from fractions import Fraction
import math

from bivalued_auctions import (
    check_distribution_identities,
    exact_e_opt_under_d,
    lower_bound_gap,
)

h = 4
print(f"h = {h}, bids high with probability 1/{h}")
print(f"{'n':>5} {'E[OPT]':>12} {'gap':>12} {'gap/sqrt(nh)':>13}")
for n in (4, 8, 16, 32, 64, 128):
    e_opt, e_dop, gap = check_distribution_identities(n, h)
    assert e_dop == n  # every auction in the class earns exactly n
    print(f"{n:>5} {float(e_opt):>12.6f} {float(gap):>12.6f} {float(gap) / math.sqrt(n * h):>13.4f}")

# the identities are exact rationals, not floats
g = lower_bound_gap(12, 4)
print()
print(f"gap(12, 4) = {g} = {float(g):.12f}")
assert g == exact_e_opt_under_d(12, 4) - 12
assert isinstance(g, Fraction)
