# Monte Carlo sanity check: sample bid vectors from the hard distribution
# and confirm the empirical means land on the exact values.  Reruns with the
# same seed are bit-identical regardless of thread count.

from bivalued_auctions import lower_bound_gap, monte_carlo_under_d

n, h, samples, seed = 100, 10, 200_000, 20260822
gap = float(lower_bound_gap(n, h))

print(f"n = {n}, h = {h}, {samples} samples, seed {seed}")
print(f"exact E[auction] = {n}, exact E[OPT] = {n + gap:.6f}")
print()
for auction in ("threshold-dop", "derand", "random"):
    r = monte_carlo_under_d(n, h, auction, samples, seed)
    z_a = (r.mc_mean_auction - n) / r.mc_stderr_auction
    z_o = (r.mc_mean_opt - (n + gap)) / r.mc_stderr_opt
    print(
        f"{auction:>14}: mean {r.mc_mean_auction:>10.4f} (z = {z_a:+.2f}),"
        f"  OPT mean {r.mc_mean_opt:>10.4f} (z = {z_o:+.2f})"
    )

r1 = monte_carlo_under_d(n, h, "derand", 50_000, seed, threads=1)
r4 = monte_carlo_under_d(n, h, "derand", 50_000, seed, threads=4)
assert (r1.mc_mean_auction, r1.mc_stderr_auction) == (r4.mc_mean_auction, r4.mc_stderr_auction)
print("\n1-thread and 4-thread runs agree exactly")
