"""Reconstructing a body from a prescribed boundary density, perturbatively.

Given a small multiplicative perturbation exp(eps * phi) of the flat density
on the circle, the radius is expanded as exp(sqrt(eps) zeta1 + eps zeta2):
zeta1 integrates signed square roots of the quarter-turn-aligned harmonics
(after a constant shift phi0 balances them), and zeta2 inverts the shift
operator f -> f - f(. + pi/2) on the remaining harmonics. The leftover
forward error splits sharply: second order in eps where the shifted aligned
part is positive, but only first order on the set where it is negative:
there the square-root ansatz cannot match the sign, and no aligned harmonic
is available to fix it.
"""

from pathlib import Path

import numpy as np

from selfmetric import (FourierDensity, forward_measure, reconstruct,
                        solve_phi0, split_harmonics)
from selfmetric.svgplot import polar_svg

print("== the balancing shift phi0 ==")
for pairs, label in [([(4, 0.5, 0.0)], "cos(4t)"),
                     ([(4, 0.5, 0.0), (8, 0.25, 0.0)], "cos(4t) + 0.5 cos(8t)")]:
    phi = FourierDensity.from_pairs(pairs, 0.01)
    res = solve_phi0(split_harmonics(phi)[0])
    print(f"  phi = {label:24s} phi0 = {res.value:+.12f}"
          f"  (imbalance {res.imbalance:+.1e})")
print("  pure cos(4t) balances itself; mixing in cos(8t) shifts the root")

print("\n== reconstruction and its residual ladder ==")
print(f"  {'eps':>8s} {'sup residual':>14s} {'classical part':>15s}"
      f" {'resid/eps':>10s} {'class/eps^1.5':>14s}")
for eps in (4e-2, 1e-2, 2.5e-3, 6.25e-4):
    phi = FourierDensity.from_pairs([(4, 0.5, 0.0)], eps)
    res = reconstruct(phi)
    print(f"  {eps:8.2g} {res.residual:14.4e} {res.residual_classical:15.4e}"
          f" {res.residual / eps:10.3f} {res.residual_classical / eps ** 1.5:14.3f}")
print("  the full residual is linear in eps (the negative-set obstruction);")
print("  the classical part decays like eps^1.5 and would keep going")

print("\n== round trip: push the reconstruction forward ==")
eps = 0.01
phi = FourierDensity.from_pairs([(4, 0.5, 0.0), (2, 0.2, 0.1)], eps)
res = reconstruct(phi)
theta, density = forward_measure(res.radius)
target = np.exp(eps * (phi.evaluate(theta) + res.phi0))
print(f"  max |density - target| on the grid: {np.max(np.abs(density - target)):.4e}")
print(f"  radius spans [{res.radius(theta).min():.6f}, {res.radius(theta).max():.6f}]")
print(f"  notes: {res.notes or '(none)'}")

out = Path(__file__).with_name("reconstructed_body.svg")
out.write_text(polar_svg(res.radius, title=f"radius for eps = {eps}"))
print(f"\n  wrote {out.name}: the body against the unit circle")

print("\n== both square-root branches are valid ==")
minus = reconstruct(phi, sign=-1)
print(f"  sign +1 residual {res.residual:.4e}, sign -1 residual {minus.residual:.4e}")
print("  the two radii are genuinely different bodies with the same density")
