"""Directed and Busemann self-perimeters of polygons.

The self-perimeter measures a convex body's boundary in the body's own
metric: each edge is weighted by the reciprocal of the distance from the base
point to the boundary along the edge direction (directed variant) or by twice
the reciprocal chord length (Busemann variant). Every triangle scores exactly
9 at its centroid, and centrally symmetric bodies always land between 6
(affine hexagons) and 8 (parallelograms).
"""

import numpy as np

from selfmetric import (Polygon2, busemann_perimeter_polygon,
                        self_perimeter_polygon, triangle_perimeters)

rng = np.random.default_rng(0)

print("== a triangle at its centroid ==")
tri = Polygon2([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
for name, fn in [("directed", self_perimeter_polygon),
                 ("busemann", busemann_perimeter_polygon)]:
    res = fn(tri, tri.centroid)
    print(f"  {name:9s} {res.value:.15f}")

print("\n== moving the base point ==")
for w in ([1 / 3, 1 / 3, 1 / 3], [0.5, 0.25, 0.25], [0.7, 0.2, 0.1], [0.9, 0.05, 0.05]):
    d, b = triangle_perimeters(w)
    print(f"  weights {np.round(w, 2)}: directed {d:8.4f}  busemann {b:8.4f}")
print("  both blow up as the point approaches the boundary; the centroid is optimal")

print("\n== the symmetric range: 6 to 8 ==")
values = []
for _ in range(2000):
    pts = rng.normal(size=(rng.integers(2, 9), 2))
    poly = Polygon2.from_hull(np.vstack([pts, -pts]))
    values.append(self_perimeter_polygon(poly, np.zeros(2)).value)
values = np.array(values)
print(f"  2000 random centrally symmetric polygons:")
print(f"  min {values.min():.6f} (affine regular hexagons reach 6)")
print(f"  max {values.max():.6f} (parallelograms reach 8)")

print("\n== the two variants on a lopsided polygon ==")
# equal on symmetric bodies, ordered on triangles; in general either one
# can edge ahead, depending on how the chords split at the base point
poly = Polygon2.from_hull(rng.normal(size=(7, 2)))
for _ in range(5):
    p = poly.centroid + 0.3 * rng.normal(size=2) * 0.2
    if poly.interior_distance(p) <= 0:
        continue
    d = self_perimeter_polygon(poly, p).value
    b = busemann_perimeter_polygon(poly, p).value
    lead = "<" if b < d else ">"
    print(f"  at {np.round(p, 3)}: busemann {b:8.4f} {lead} directed {d:8.4f}")
