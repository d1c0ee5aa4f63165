"""Regular k-gons: closed forms, extremes, and the slow march to the disk.

The self-perimeter of the regular k-gon about its center has a closed form in
k that depends on k mod 4; it converges to 2*pi like 1/k^2, but the constant
in front is visible: even the 64-gon still sits 5e-3 above the circle value.
"""

import numpy as np

from selfmetric import kgon_self_perimeter, regular_polygon, self_perimeter_polygon

print("== closed form vs explicit edge sums ==")
print(f"  {'k':>4s} {'closed form':>18s} {'edge sum':>18s} {'difference':>12s}")
for k in range(3, 17):
    closed = kgon_self_perimeter(k)
    exact = self_perimeter_polygon(regular_polygon(k), np.zeros(2)).value
    print(f"  {k:4d} {closed:18.12f} {exact:18.12f} {abs(closed - exact):12.2e}")

print("\n  square -> 8 and hexagon -> 6: the two symmetric extremes")
print(f"  triangle -> {kgon_self_perimeter(3):.12f} (the universal optimum 9)")

print("\n== convergence to the disk ==")
two_pi = 2.0 * np.pi
print(f"  {'k':>5s} {'P(k)':>16s} {'P(k) - 2 pi':>14s} {'x k^2':>10s}")
for k in (8, 16, 32, 64, 128, 256, 512):
    gap = kgon_self_perimeter(k) - two_pi
    print(f"  {k:5d} {kgon_self_perimeter(k):16.10f} {gap:14.6e} {gap * k * k:10.5f}")
print(f"  gap * k^2 settles near 2 pi^3 / 3 = {2 * np.pi ** 3 / 3:.5f}")
print("  (k = 0 mod 4; the other residue classes have their own constants)")
