"""Counting odd unimodal sequences exactly.

Lists the sequences of size 5, compares the fast engine with brute force,
prints a rank distribution and shows how the second rank moment grows
against its leading term 3n/2 * ou(n).
"""

from oddunimodal import asympt, exact

print("sequences of size 5 (peak in brackets):")
for seq in exact.brute_force_enumerate(5):
    print("  ", seq, " rank", seq.rank)

counts = exact.ou_counts(20)
print("\nou(0..20):", [int(c) for c in counts])
assert all(len(exact.brute_force_enumerate(n)) == counts[n] for n in range(21))
print("brute force agrees for n <= 20")

dist = exact.rank_distribution(12)
print("\nrank distribution at n = 12:", dict(sorted(dist.counts.items())))
print("symmetric:", dist.is_symmetric())

mom = exact.rank_moments(2000, 2)
print("\n   n   ou_2(n) / (1.5 n ou(n))")
for n in (100, 250, 500, 1000, 2000):
    print(f"{n:5d}   {float(mom[2][n]) / (1.5 * n * float(mom[0][n])):.5f}")

print("\npartitions: Rademacher's series rounded vs the Euler product")
p = exact.partition_count(200)
for n in (10, 50, 200):
    r = asympt.rademacher_p(n)
    print(f"  p({n}) = {p[n]}  series {r.rounded}  distance to integer {r.residual:.2e}")
