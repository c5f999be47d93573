"""Asymptotic formulas next to exact values.

The first table divides ou(n) by its main term. The second evaluates the
Kloosterman-Bessel series for the rank moments in both variants (see
README); the printed one settles near 1/sqrt(2) of the true value, the
corrected one tends to 1. The last part compares the saddle-point estimate
of the number of sequences with a given peak with exact counts.
"""

import math

from oddunimodal import asympt, exact

ou = exact.ou_counts(2000)
print("   n   ou(n) / main term")
for n in (250, 500, 1000, 2000):
    print(f"{n:5d}   {float(ou[n]) / asympt.ou_main_term(n):.5f}")

mom = exact.rank_moments(1000, 2)
print("\n   n  ell   printed   corrected   (series / exact)")
for n in (200, 500, 1000):
    for ell in (0, 2):
        vals = [asympt.moment_asymptotic(n, ell, variant=v).value / float(mom[ell][n])
                for v in ("printed", "corrected")]
        print(f"{n:5d}  {ell:3d}   {vals[0]:.5f}   {vals[1]:.5f}")
print(f"1/sqrt(2) = {1 / math.sqrt(2):.5f}")

n = 2000
pc = exact.peak_counts(n)
print(f"\nsaddle point at n = {n}:  peak   r   saddle/exact")
for m in range(0, (n - 1) // 2 + 1, 6):
    r = float(asympt.peak_lattice_r(n, m))
    if abs(r) <= 1.5 and pc[m]:
        print(f"{2 * m + 1:28d} {r:6.2f}   {asympt.saddle_ou_m(n, m) / float(pc[m]):.4f}")
