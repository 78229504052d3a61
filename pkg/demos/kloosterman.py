"""
Kloosterman sums and the Weil bound
===================================

|S(m, n; q)| <= tau(q) gcd(m, n, q)^(1/2) q^(1/2), checked on a grid.
"""

from lattice_angles.arith import kloosterman, weil_bound, weil_certificate

for m, n, q in [(0, 0, 6), (1, 1, 2), (1, 1, 5), (3, 7, 101)]:
    s = kloosterman(m, n, q)
    print(f"S({m},{n};{q}) = {s.real:+.6f}   ratio to bound {abs(s) / weil_bound(m, n, q):.4f}")

report = weil_certificate(300, range(-5, 6), range(-5, 6))
print(f"{report.checked} sums, max ratio {report.max_ratio:.6f} at {report.worst}")
