"""Inverse problem for the self-surface measure, perturbatively near the disk.

A smooth origin-star body with radial function r carries the boundary density

    f(theta) = sqrt(r^2 + r'^2) / r(theta + arccot(r'/r)),

whose integral over the circle is the directed self-perimeter. Given a target
density exp(eps * (phi + phi0)) with phi a zero-mean trigonometric polynomial,
the inverse problem asks for r reproducing it. Writing zeta = log r and
expanding in powers of eps**0.5 splits phi into harmonics aligned with the
quarter-turn grid (k in 4Z) and the rest: the aligned part is matched at order
eps**0.5 by a slope field with square-root cusps, the rest at order eps by a
spectral division, and the constant phi0 is pinned by a signed square-root
balance condition.

The order-eps balance forces (3/2) * zeta1'^2 = phi_aligned + phi0 pointwise.
A square cannot be negative, so on the set where phi_aligned + phi0 < 0 the
expansion carries an irreducible order-eps defect: the sup-norm residual of
the reconstruction decays like eps there, and like eps**1.5 on the positive
set (away from the cusps, where the expansion is non-uniform). Both numbers
are reported; see ReconstructionResult.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .geometry import (DegenerateSectionError, GeometryError, NotInteriorError,
                       PolytopeN, RadiusProfile, central_section, fourier_eval,
                       lebesgue_volume)
from .perimeter2 import smooth_density
from .selfvolume import self_volume_recursive

GRID_NODES = 4096        # default circle resolution; divisible by 4
CUSP_GUARD = 2           # grid nodes dropped on each side of a slope-field cusp
K_MAX_DEFAULT = 64       # harmonic cutoff of the returned radius profile
BALANCE_TOL = 1e-12      # bisection target for the signed square-root balance
CLOSURE_TOL = 1e-6       # allowed periodicity gap of the integrated slope field

__all__ = [
    "FourierDensity", "Phi0Result", "ReconstructionResult", "FacetDensityRow",
    "SurfaceMeasure", "FourierDensityError", "ClosureError", "circle_grid", "split_harmonics",
    "sqrt_imbalance", "solve_phi0", "leading_order", "second_order",
    "shift_eigenvalue", "quarter_shift_difference", "forward_measure",
    "reconstruct", "general_n_forward",
]


class FourierDensityError(ValueError):
    """Invalid density: bad harmonics, broken symmetry, or a missing aligned part."""


class ClosureError(ValueError):
    """Integrated slope field fails to close into a periodic function."""


def circle_grid(nodes):
    """Uniform grid on [0, 2pi), endpoint excluded. nodes must be a multiple of 4."""
    nodes = int(nodes)
    if nodes < 8 or nodes % 4 != 0:
        raise ValueError("nodes must be a multiple of 4, at least 8")
    return np.linspace(0.0, 2.0 * np.pi, nodes, endpoint=False)


class FourierDensity:
    """Zero-mean real trigonometric polynomial with a perturbation scale.

    Coefficients are indexed by nonzero integer harmonics with
    c_{-k} = conj(c_k); the k = 0 term is excluded by construction (the
    constant shift is solved for, not prescribed). An empty coefficient set is
    the zero density. epsilon >= 0 scales the perturbation.
    """

    def __init__(self, ks, coeffs, epsilon):
        ks = np.asarray(ks, dtype=int)
        coeffs = np.asarray(coeffs, dtype=complex)
        if ks.ndim != 1 or ks.shape != coeffs.shape:
            raise FourierDensityError("ks and coeffs must be 1d arrays of equal length")
        if len(np.unique(ks)) != len(ks):
            raise FourierDensityError("duplicate harmonic index")
        if np.any(ks == 0):
            raise FourierDensityError("k=0 is excluded: the constant shift is not part of the density")
        epsilon = float(epsilon)
        if not np.isfinite(epsilon) or epsilon < 0.0:
            raise FourierDensityError(f"epsilon must be a finite nonnegative number, got {epsilon}")
        order = np.argsort(ks)
        ks, coeffs = ks[order], coeffs[order]
        cmax = float(np.max(np.abs(coeffs))) if len(coeffs) else 0.0
        lookup = dict(zip(ks.tolist(), coeffs))
        for k, c in lookup.items():
            mate = lookup.get(-k)
            if mate is None or abs(np.conj(c) - mate) > 1e-12 * max(1.0, cmax):
                raise FourierDensityError(f"coefficients are not conjugate-symmetric at k={k}")
        self.ks = ks
        self.coeffs = coeffs
        self.epsilon = epsilon

    @classmethod
    def from_pairs(cls, pairs, epsilon):
        """Build from [(k, re, im), ...]; missing negative harmonics are mirrored."""
        lookup = {}
        for k, re, im in pairs:
            k = int(k)
            c = complex(re, im)
            if k in lookup and abs(lookup[k] - c) > 1e-12 * max(1.0, abs(c)):
                raise FourierDensityError(f"conflicting duplicate coefficient at k={k}")
            lookup[k] = c
        for k in list(lookup):
            if -k not in lookup:
                lookup[-k] = np.conj(lookup[k])
        ks = np.array(sorted(lookup), dtype=int)
        return cls(ks, np.array([lookup[k] for k in ks]), epsilon)

    def evaluate(self, theta):
        theta = np.asarray(theta, dtype=float)
        if len(self.ks) == 0:
            return np.zeros_like(theta)
        return fourier_eval(theta, self.ks, self.coeffs)

    def is_zero(self):
        return len(self.ks) == 0 or float(np.max(np.abs(self.coeffs))) <= 1e-15


def split_harmonics(phi):
    """Partition a density into its k in 4Z part and the rest.

    Returns (aligned, rest), both FourierDensity with the same epsilon;
    aligned + rest reproduces the input coefficient for coefficient.
    """
    aligned = phi.ks % 4 == 0
    return (FourierDensity(phi.ks[aligned], phi.coeffs[aligned], phi.epsilon),
            FourierDensity(phi.ks[~aligned], phi.coeffs[~aligned], phi.epsilon))


def sqrt_imbalance(values, gamma):
    """Signed square-root balance of a grid function against a shift.

    Quadrature of sign(v - gamma) * sqrt(|v - gamma|) over the circle;
    continuous and strictly decreasing in gamma, positive below min(v),
    negative above max(v). Its root picks the constant shift.
    """
    s = np.asarray(values, dtype=float) - gamma
    return float(np.mean(np.sign(s) * np.sqrt(np.abs(s))) * 2.0 * np.pi)


@dataclass
class Phi0Result:
    value: float
    trivial: bool        # True when the aligned part vanishes and 0 is returned
    imbalance: float     # sqrt_imbalance at the returned shift


def solve_phi0(phi_p, nodes=GRID_NODES):
    """Constant shift balancing the signed square roots of the aligned part.

    Accepts a FourierDensity or raw samples on a uniform circle grid. Bisects
    the imbalance over [min - 1, max + 1]; an identically zero input returns
    value 0.0 with trivial=True instead of bisecting.
    """
    if isinstance(phi_p, FourierDensity):
        if phi_p.is_zero():
            return Phi0Result(0.0, True, 0.0)
        vals = phi_p.evaluate(circle_grid(nodes))
    else:
        vals = np.asarray(phi_p, dtype=float)
        if float(np.max(np.abs(vals))) <= 1e-15:
            return Phi0Result(0.0, True, 0.0)
    lo = float(np.min(vals)) - 1.0
    hi = float(np.max(vals)) + 1.0
    g = np.inf
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        g = sqrt_imbalance(vals, mid)
        if abs(g) < BALANCE_TOL:
            break
        if g > 0.0:
            lo = mid
        else:
            hi = mid
    if abs(g) >= 1e-10:
        raise RuntimeError(f"balance bisection did not converge (imbalance {g:.3e})")
    return Phi0Result(-mid, False, g)


def _snap_small(values):
    # zeros of the shifted density that land on grid nodes carry O(1e-16)
    # float noise; sqrt amplifies it to 1e-8, enough to break quarter-turn
    # symmetry, so snap them to exact zero
    cap = max(1.0, float(np.max(np.abs(values))))
    return np.where(np.abs(values) < 1e-12 * cap, 0.0, values)


def cusp_exclusion_mask(s, guard=CUSP_GUARD):
    """Boolean mask dropping `guard` nodes on each side of every sign change of s."""
    s = np.asarray(s, dtype=float)
    n = len(s)
    sgn = np.sign(s)
    mask = np.ones(n, dtype=bool)
    flips = np.nonzero(sgn != np.roll(sgn, -1))[0]
    for j in flips:
        for d in range(-guard + 1, guard + 1):
            mask[(j + d) % n] = False
    return mask


def leading_order(phi, sign=1, nodes=GRID_NODES, phi0=None):
    """Leading log-radius correction, sampled on the uniform circle grid.

    Integrates sign * sgn(s) * sqrt((2/3)|s|) with s the aligned part plus the
    balancing shift, then removes the mean (the integration constant is not
    determined at this order; zero mean is the convention). The integral
    closes into a periodic function exactly when the shift balances the signed
    square roots; a closure gap above CLOSURE_TOL raises ClosureError.

    phi0 overrides the computed shift, chiefly to let callers reuse a solve.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    theta = circle_grid(nodes)
    phi_p, _ = split_harmonics(phi)
    if phi0 is None:
        p0 = solve_phi0(phi_p, nodes)
        if p0.trivial:
            raise FourierDensityError(
                "no quarter-turn-aligned harmonics: the leading slope field is identically zero")
        phi0 = p0.value
    s = _snap_small(phi_p.evaluate(theta) + float(phi0))
    slope = sign * np.sign(s) * np.sqrt((2.0 / 3.0) * np.abs(s))
    gap = abs(float(np.sum(slope))) * (2.0 * np.pi / nodes)
    if gap > CLOSURE_TOL:
        raise ClosureError(
            f"slope field does not close (gap {gap:.3e}); the shift is inconsistent")
    z1 = cumulative_trapezoid(slope, theta, initial=0.0)
    return z1 - float(np.mean(z1))


def shift_eigenvalue(k):
    """Eigenvalue of f -> f - f(. + pi/2) on the harmonic exp(i k theta)."""
    return (0.0, 1.0 - 1.0j, 2.0, 1.0 + 1.0j)[int(k) % 4]


def quarter_shift_difference(values):
    """f - f(. + pi/2) for samples on a uniform circle grid (length % 4 == 0)."""
    values = np.asarray(values)
    if len(values) % 4 != 0:
        raise ValueError("grid length must be a multiple of 4")
    return values - np.roll(values, -len(values) // 4)


def second_order(phi):
    """Order-eps log-radius coefficients: spectral division of the non-aligned part.

    Returns (ks, coeffs) with coeffs = phi_k / (1 - exp(i k pi / 2)) over
    k not in 4Z. The quarter-shift difference operator annihilates aligned
    harmonics, so its inverse is defined only off them; the annihilated
    component is fixed to zero for reproducibility.
    """
    _, phi_u = split_harmonics(phi)
    if np.any(phi_u.ks % 4 == 0):
        raise RuntimeError("internal: aligned harmonic reached the spectral division")
    lam = np.array([shift_eigenvalue(k) for k in phi_u.ks], dtype=complex)
    if len(lam) == 0:
        return phi_u.ks.copy(), phi_u.coeffs.copy()
    return phi_u.ks.copy(), phi_u.coeffs / lam


def forward_measure(profile, nodes=GRID_NODES):
    """Boundary density of a radial profile on the uniform circle grid.

    Returns (theta, density). The density integrates to the directed
    self-perimeter; for any constant profile it is identically 1.
    """
    theta = circle_grid(nodes)
    r = profile(theta)
    if float(np.min(r)) <= 0.0:
        raise GeometryError("boundary density needs a strictly positive radius")
    return theta, smooth_density(profile, theta)


@dataclass
class ReconstructionResult:
    """Perturbative solution of the inverse problem.

    zeta1, zeta2 sample the two log-radius corrections on `theta`; radius is
    exp(sqrt(eps) zeta1 + eps zeta2) projected to harmonics |k| <= k_max.
    residual is the sup of |log forward density - eps (phi + phi0)| over the
    grid minus cusp neighborhoods, evaluated on the unprojected
    reconstruction; residual_classical restricts the sup to the set where the
    shifted aligned part is positive, the region where the expansion is
    second-order accurate. notes collects advisory warnings (loss of
    convexity or positivity of the projected radius).
    """
    zeta1: np.ndarray
    zeta2: np.ndarray
    sign_branch: int
    radius: RadiusProfile
    residual: float
    residual_classical: float
    phi0: float
    theta: np.ndarray
    notes: tuple


def reconstruct(phi, sign=1, nodes=GRID_NODES, k_max=K_MAX_DEFAULT):
    """Solve the inverse problem to two perturbative orders.

    eps = 0 returns the unit disk with zero residual. Otherwise the aligned
    part must be nonzero (FourierDensityError if not); both sign branches are
    valid and give mirror-image bodies.
    """
    theta = circle_grid(nodes)
    eps = phi.epsilon
    if eps == 0.0:
        unit = RadiusProfile([0], [1.0])
        zero = np.zeros_like(theta)
        return ReconstructionResult(zero, zero.copy(), sign, unit, 0.0, 0.0, 0.0, theta, ())
    phi_p, _ = split_harmonics(phi)
    p0 = solve_phi0(phi_p, nodes)
    if p0.trivial:
        raise FourierDensityError(
            "no quarter-turn-aligned harmonics: the leading slope field is identically zero")
    z1 = leading_order(phi, sign=sign, nodes=nodes, phi0=p0.value)
    ks2, c2 = second_order(phi)
    z2 = fourier_eval(theta, ks2, c2) if len(ks2) else np.zeros_like(theta)
    samples = np.exp(np.sqrt(eps) * z1 + eps * z2)
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        k_ret = min(int(k_max), nodes // 2 - 1)
        try:
            radius = RadiusProfile.from_samples(samples, k_max=k_ret)
        except GeometryError:
            notes.append("projected radius lost positivity; its validation is disabled")
            radius = RadiusProfile.from_samples(samples, k_max=k_ret, check=False)
        # residual is judged on the unprojected reconstruction: the projection
        # error of a hard cutoff would mask the expansion's own defect
        full = RadiusProfile.from_samples(samples, k_max=nodes // 2 - 1, check=False)
    notes.extend(str(w.message) for w in caught)
    _, density = forward_measure(full, nodes)
    resid_fn = np.log(density) - eps * (phi.evaluate(theta) + p0.value)
    s = _snap_small(phi_p.evaluate(theta) + p0.value)
    keep = cusp_exclusion_mask(s)
    residual = float(np.max(np.abs(resid_fn[keep])))
    classical = keep & (s > 0.0)
    residual_classical = float(np.max(np.abs(resid_fn[classical]))) if np.any(classical) else residual
    return ReconstructionResult(z1, z2, sign, radius, residual, residual_classical,
                                p0.value, theta, tuple(notes))


@dataclass
class FacetDensityRow:
    """Per-facet slice of the self-surface measure of a polytope."""
    facet_index: int
    normal: np.ndarray
    facet_measure: float
    section_measure: float
    density: float       # self-volume of the central section / its measure
    cell_mass: float     # density * facet measure


class SurfaceMeasure:
    """Self-surface measure of a polytope, resolved per facet.

    The density over the radial projection of facet F to the unit sphere is
    the constant c_F = (self-volume of the central section parallel to F) /
    (measure of that section), times the Jacobian r^{n-1} / <theta, normal>.
    Total mass equals dim times the self-volume of the polytope.
    """

    def __init__(self, poly, max_dim=5):
        if not isinstance(poly, PolytopeN):
            raise TypeError("SurfaceMeasure expects a PolytopeN")
        if poly.dim < 2:
            raise GeometryError("surface measure needs dimension at least 2")
        if not poly.origin_interior():
            raise NotInteriorError("surface measure needs the origin strictly inside")
        rows = []
        for i, facet in enumerate(poly.facets):
            section = central_section(poly, facet.normal)
            sec_measure = lebesgue_volume(section)
            if sec_measure <= 0.0:
                raise DegenerateSectionError(f"degenerate central section at facet {i}")
            sec_volume = self_volume_recursive(section, max_dim=max_dim).value
            density = sec_volume / sec_measure
            rows.append(FacetDensityRow(i, facet.normal.copy(), facet.measure,
                                        sec_measure, density, density * facet.measure))
        self.dim = poly.dim
        self.rows = tuple(rows)
        self.total_mass = float(sum(r.cell_mass for r in rows))
        self._normals = np.array([f.normal for f in poly.facets])
        self._offsets = np.array([f.offset for f in poly.facets])
        self._densities = np.array([r.density for r in rows])

    def evaluate(self, directions):
        """Density at unit directions (m x dim array); rays must leave through a facet."""
        dirs = np.atleast_2d(np.asarray(directions, dtype=float))
        norms = np.linalg.norm(dirs, axis=1, keepdims=True)
        if np.any(norms <= 0.0):
            raise GeometryError("zero direction")
        dirs = dirs / norms
        den = dirs @ self._normals.T
        with np.errstate(divide="ignore"):
            t = np.where(den > 0.0, self._offsets / den, np.inf)
        hit = np.argmin(t, axis=1)
        idx = np.arange(len(dirs))
        r = t[idx, hit]
        return self._densities[hit] * r ** (self.dim - 1) / den[idx, hit]


def general_n_forward(poly, max_dim=5):
    """Self-surface measure of a polytope in any supported dimension."""
    return SurfaceMeasure(poly, max_dim=max_dim)
