"""Random odd unimodal sequences.

Draws Boltzmann samples at n = 10^6 and compares the scaled peak with its
limit law, then draws exact-size samples at n = 7 and checks that all 20
sequences appear equally often.
"""

from collections import Counter

from oddunimodal import boltzmann as bz
from oddunimodal import special, stats

n = 10**6
params = bz.BoltzmannParams.for_size(n)
batch = bz.sample_fast(params, bz.make_rng(2024), 100_000, k_small=3)
peak = bz.peak_statistic(batch, n)
print(f"n = {n}, q = {params.q:.8f}")
print("KS distance of the scaled peak to exp(-exp(-v)/2):",
      round(stats.ks_distance(peak, special.LimitLaw("gumbel_half")), 4))
print("KS distance of the scaled count of ones to Exp(1):",
      round(stats.ks_distance(bz.smallpart_statistics(batch, n, 3)["scaled"]["L"][:, 0],
                              special.LimitLaw("exp")), 4))

small = bz.BoltzmannParams.for_size(7)
run = bz.sample_exact_batch(small, bz.make_rng(7), 20_000)
seen = Counter(run.batch.record(i).as_sequence() for i in range(run.accepted))
stat, p = stats.chi_square_uniform(seen.values(), categories=20)
print(f"\nexact size 7: {len(seen)} distinct sequences, chi-square p = {p:.3f}, "
      f"acceptance {run.acceptance_rate:.3f} (exact {bz.exact_acceptance(7):.3f})")
for seq, c in sorted(seen.items())[:5]:
    print("  ", seq, c)
