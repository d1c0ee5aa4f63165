"""Recursive self-volume: cubes, simplices, products, and affine maps.

The self-volume of an n-polytope with the origin inside is built facet by
facet: each facet contributes its measure times the self-volume-to-measure
ratio of the central section parallel to it, and dimension 1 is seeded with
the value 2. The result ignores scale and every invertible linear map.
"""

import numpy as np

from selfmetric import (PolytopeN, affine_image, cartesian_product, cube,
                        hypercube_self_volume, interval, polygon_as_polytope,
                        regular_polygon, self_volume_recursive,
                        simplex_self_volume)

print("== hypercubes: 2^n ==")
for n in (1, 2, 3, 4):
    got = self_volume_recursive(cube(n)).value
    print(f"  n={n}: recursive {got:.12f}   closed form {hypercube_self_volume(n):.1f}")

print("\n== simplices: (n+1)^n / n! at the centroid ==")
for n in (2, 3):
    verts = np.vstack([np.zeros(n), np.eye(n)])
    centroid = verts.mean(axis=0)
    got = self_volume_recursive(PolytopeN(verts - centroid)).value
    want = simplex_self_volume(n, np.full(n + 1, 1.0 / (n + 1)))
    print(f"  n={n}: recursive {got:.12f}   closed form {want:.12f}")

print("\n== products multiply ==")
hexagon = polygon_as_polytope(regular_polygon(6))
square = polygon_as_polytope(regular_polygon(4))
for name, base, want in [("hexagon", hexagon, 3.0), ("square", square, 4.0)]:
    prism = cartesian_product(base, interval())
    got = self_volume_recursive(prism).value
    print(f"  {name} prism: {got:.12f} = {want:.0f} (2d factor) x 2 (interval)")

print("\n== affine invariance ==")
rng = np.random.default_rng(1)
pts = rng.normal(size=(12, 3))
body = PolytopeN(np.vstack([pts, -pts]))
base_value = self_volume_recursive(body).value
print(f"  random symmetric 3-polytope: {base_value:.12f}")
for _ in range(4):
    m = rng.normal(size=(3, 3))
    if abs(np.linalg.det(m)) < 0.1:
        continue
    mapped = self_volume_recursive(affine_image(body, m)).value
    print(f"  under a random linear map:  {mapped:.12f}"
          f"   (det {np.linalg.det(m):+.3f})")

print("\n== per-facet breakdown of the 3-cube ==")
res = self_volume_recursive(cube(3))
for c in res.facet_contributions:
    print(f"  facet {c.facet_index}: measure {c.facet_measure:.1f}, "
          f"section measure {c.section_measure:.1f}, "
          f"section self-volume {c.section_self_volume:.1f}, "
          f"contribution {c.contribution:.1f}")
print(f"  value = sum / dim = {res.value:.1f}")
