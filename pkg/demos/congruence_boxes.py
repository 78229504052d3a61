"""
Counting solutions of ad = 1 (mod Nc) in boxes
==============================================

Full boxes [0, c-1]^2 with N = 1 hold exactly phi(c) solutions; smaller
boxes fluctuate around Phi_N(c) |I1| |I2| / (|c| N^2).
"""

from lattice_angles.arith import CongruenceBox, count_congruence_box, phi_N, prop1_main_term

for c in (6, 12, 97, 360):
    box = CongruenceBox(c, 1, (0, c - 1), (0, c - 1))
    print(f"c={c:4d}  count={count_congruence_box(box):4d}  c*Phi_1(c)={c * phi_N(c, 1)}")

for N in (1, 2, 3):
    box = CongruenceBox(2003, N, (100, 1100), (-400, 600))
    n, main = count_congruence_box(box), prop1_main_term(box)
    print(f"N={N}  count={n}  main={main:.1f}  diff={n - main:+.1f}")
