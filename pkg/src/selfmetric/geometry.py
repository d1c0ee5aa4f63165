"""Convex-body primitives: polygons, Fourier radius profiles, V-represented polytopes.

Everything downstream (perimeters, self-volumes, center optimization, the inverse
problem) is built on the handful of operations defined here: gauge radius along a
direction, chords, support values, central hyperplane sections and facet data.
"""

from __future__ import annotations

import itertools
import math
import warnings

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.spatial import ConvexHull, QhullError

REL_TOL = 1e-9        # relative tolerance for collinearity / degeneracy decisions
PROFILE_GRID = 2048   # dense grid used to validate radius profiles
_EVAL_CHUNK = 256     # angle chunk for Fourier evaluation, keeps temporaries small


def fourier_eval(theta, ks, coeffs):
    """Evaluate sum_k c_k exp(i k theta) for conjugate-symmetric coefficients.

    Returns the real part; evaluation is chunked over theta to bound the size
    of the outer-product temporary. Scalar input gives a scalar back.
    """
    th = np.asarray(theta, dtype=float)
    flat = np.atleast_1d(th).ravel()
    out = np.empty(flat.shape, dtype=complex)
    for lo in range(0, len(flat), _EVAL_CHUNK):
        blk = flat[lo:lo + _EVAL_CHUNK]
        out[lo:lo + _EVAL_CHUNK] = np.exp(1j * np.outer(blk, ks)) @ coeffs
    res = out.real.reshape(np.shape(th))
    return float(res) if np.isscalar(theta) else res


class GeometryError(ValueError):
    """Invalid geometric input."""


class NotInteriorError(GeometryError):
    """A point required to lie strictly inside a body does not."""


class DegenerateSectionError(GeometryError):
    """A central section collapsed below full dimension."""


# ---------------------------------------------------------------------------
# bodies


class Polygon2:
    """Strictly convex polygon with vertices in counterclockwise order.

    Precomputes the edge frame (unit tangents, outward unit normals, offsets)
    so that ray casting reduces to a vectorized halfplane intersection.
    """

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise GeometryError(f"expected an (m, 2) vertex array with m >= 3, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise GeometryError("polygon vertices must be finite")
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.linalg.norm(edges, axis=1)
        if np.any(lengths == 0.0):
            raise GeometryError("polygon has a repeated vertex")
        nxt = np.roll(edges, -1, axis=0)
        cross = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
        floor = REL_TOL * lengths * np.roll(lengths, -1)
        if np.all(cross < 0.0):
            raise GeometryError("vertices are clockwise; counterclockwise order is required")
        if np.any(cross <= floor):
            raise GeometryError("polygon is not strictly convex (reflex or collinear vertex)")
        self.vertices = v
        self.edges = edges
        self.edge_lengths = lengths
        self.tangents = edges / lengths[:, None]
        # outward normal of a CCW edge is the tangent rotated -90 degrees
        self.normals = np.column_stack([self.tangents[:, 1], -self.tangents[:, 0]])
        self.offsets = np.einsum("ij,ij->i", self.normals, v)
        self.scale = float(np.max(np.linalg.norm(v, axis=1)))

    def __len__(self):
        return len(self.vertices)

    @classmethod
    def from_hull(cls, points):
        """Build the CCW convex hull of an arbitrary point cloud."""
        pts = np.asarray(points, dtype=float)
        try:
            hull = ConvexHull(pts)
        except QhullError as exc:
            raise GeometryError(f"points are degenerate, no 2d hull: {exc}") from exc
        return cls(pts[hull.vertices])  # qhull returns 2d hull vertices in CCW order

    @property
    def area(self):
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))

    @property
    def centroid(self):
        """Area centroid (always strictly interior for a convex polygon)."""
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        c = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        return (v + w).T @ c / (6.0 * self.area)

    def interior_distance(self, point):
        """Smallest slack over the edge halfplanes; positive iff strictly interior."""
        p = np.asarray(point, dtype=float)
        return float(np.min(self.offsets - self.normals @ p))

    def contains(self, point, margin=0.0):
        return self.interior_distance(point) > margin


class RadiusProfile:
    """Star-shaped body given by a truncated Fourier series of its radial function.

    r(theta) = sum_k c_k exp(i k theta) with c_{-k} = conj(c_k), so r is real.
    Derivatives are evaluated analytically from the coefficients; finite
    differences are never used. Positivity of r is enforced on a dense grid at
    construction; the convexity margin r^2 + 2 r'^2 - r r'' is advisory only
    (a warning), because near-limit shapes fail it by harmless amounts.
    """

    def __init__(self, ks, coeffs, check=True, warn_nonconvex=True):
        ks = np.asarray(ks, dtype=int)
        coeffs = np.asarray(coeffs, dtype=complex)
        if ks.ndim != 1 or ks.shape != coeffs.shape:
            raise GeometryError("ks and coeffs must be 1d arrays of equal length")
        if len(np.unique(ks)) != len(ks):
            raise GeometryError("duplicate harmonic index in radius profile")
        order = np.argsort(ks)
        ks, coeffs = ks[order], coeffs[order]
        cmax = float(np.max(np.abs(coeffs))) if len(coeffs) else 0.0
        if cmax == 0.0:
            raise GeometryError("radius profile has no nonzero coefficient")
        lookup = dict(zip(ks.tolist(), coeffs))
        for k, c in lookup.items():
            mate = lookup.get(-k)
            if mate is None or abs(np.conj(c) - mate) > 1e-12 * cmax:
                raise GeometryError(f"coefficients are not conjugate-symmetric at k={k}")
        self.ks = ks
        self.coeffs = coeffs
        if check:
            theta = np.linspace(0.0, 2.0 * np.pi, PROFILE_GRID, endpoint=False)
            r = self(theta)
            if np.min(r) <= 0.0:
                raise GeometryError("radius profile is not strictly positive")
            if warn_nonconvex:
                margin = self.convexity_margin(theta=theta)
                if margin < -REL_TOL * float(np.max(r)) ** 2:
                    warnings.warn(f"radius profile fails the convexity check (margin {margin:.3e})",
                                  stacklevel=2)

    @classmethod
    def from_coeff_pairs(cls, pairs, **kwargs):
        """Build from [(k, re, im), ...]; missing negative harmonics are mirrored."""
        lookup = {}
        for k, re, im in pairs:
            k = int(k)
            c = complex(re, im)
            if k in lookup and abs(lookup[k] - c) > 1e-12 * max(1.0, abs(c)):
                raise GeometryError(f"conflicting duplicate coefficient at k={k}")
            lookup[k] = c
        for k in list(lookup):
            if -k not in lookup:
                lookup[-k] = np.conj(lookup[k])
        ks = np.array(sorted(lookup))
        return cls(ks, np.array([lookup[k] for k in ks]), **kwargs)

    @classmethod
    def from_samples(cls, values, k_max, **kwargs):
        """Project uniform-grid samples of r onto harmonics |k| <= k_max by FFT."""
        values = np.asarray(values, dtype=float)
        n = len(values)
        if k_max >= n // 2:
            raise GeometryError(f"k_max={k_max} needs more than {2 * k_max} samples")
        spec = np.fft.fft(values) / n
        ks = np.arange(-k_max, k_max + 1)
        return cls(ks, spec[ks % n], **kwargs)

    def __call__(self, theta):
        return fourier_eval(theta, self.ks, self.coeffs)

    def derivative(self, theta):
        return fourier_eval(theta, self.ks, 1j * self.ks * self.coeffs)

    def second_derivative(self, theta):
        return fourier_eval(theta, self.ks, -(self.ks ** 2) * self.coeffs)

    @property
    def k_max(self):
        return int(np.max(np.abs(self.ks)))

    def convexity_margin(self, n=PROFILE_GRID, theta=None):
        """Minimum of r^2 + 2 r'^2 - r r'' on a grid; nonnegative for convex bodies."""
        if theta is None:
            theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        r = self(theta)
        dr = self.derivative(theta)
        ddr = self.second_derivative(theta)
        return float(np.min(r * r + 2.0 * dr * dr - r * ddr))

    def max_radius(self, n=PROFILE_GRID):
        theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        return float(np.max(self(theta)))


class Facet:
    """One facet of a PolytopeN: unit outward normal, offset, measure, vertex ids."""

    __slots__ = ("normal", "offset", "measure", "vertex_ids")

    def __init__(self, normal, offset, measure, vertex_ids):
        self.normal = normal
        self.offset = float(offset)
        self.measure = float(measure)
        self.vertex_ids = vertex_ids

    def __repr__(self):
        return f"Facet(normal={np.round(self.normal, 6)}, offset={self.offset:.6g}, measure={self.measure:.6g})"


def _simplex_facet_measure(pts):
    # (d-1)-measure of a simplex embedded in R^d via the Gram determinant
    m = pts[1:] - pts[0]
    g = m @ m.T
    det = np.linalg.det(g)
    if det < 0.0:
        det = 0.0
    return np.sqrt(det) / math.factorial(len(pts) - 1)


class PolytopeN:
    """Convex polytope in R^d from its vertices; facets derived by convex hull.

    The vertex array is the single source of truth. Construction prunes
    non-extreme points, merges coplanar hull simplices into true facets and
    records a segment graph (hull simplex edges, a superset of the 1-skeleton)
    used for hyperplane crossing enumeration.
    """

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or len(v) < 2:
            raise GeometryError(f"expected an (m, d) vertex array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise GeometryError("polytope vertices must be finite")
        self.dim = int(v.shape[1])
        if self.dim == 1:
            lo, hi = float(np.min(v)), float(np.max(v))
            if hi - lo <= REL_TOL * max(abs(lo), abs(hi), 1.0):
                raise GeometryError("1d polytope is degenerate")
            self.vertices = np.array([[lo], [hi]])
            # facet of a segment is a point; its 0-measure is 1 by convention
            self.facets = [Facet(np.array([-1.0]), -lo, 1.0, np.array([0])),
                           Facet(np.array([1.0]), hi, 1.0, np.array([1]))]
            self.edges = np.array([[0, 1]])
            self._volume = hi - lo
        else:
            if len(v) < self.dim + 1:
                raise GeometryError(f"need at least {self.dim + 1} vertices in dimension {self.dim}")
            try:
                hull = ConvexHull(v)
            except QhullError as exc:
                raise GeometryError(f"degenerate polytope (no full-dimensional hull): {exc}") from exc
            keep = np.array(sorted(hull.vertices))
            remap = -np.ones(len(v), dtype=int)
            remap[keep] = np.arange(len(keep))
            self.vertices = v[keep]
            simplices = remap[hull.simplices]
            self._volume = float(hull.volume)
            self.facets = self._merge_facets(hull, simplices)
            pairs = set()
            for s in simplices:
                for a, b in itertools.combinations(sorted(s.tolist()), 2):
                    pairs.add((a, b))
            self.edges = np.array(sorted(pairs))
        self.scale = float(np.max(np.linalg.norm(self.vertices, axis=1)))

    def _merge_facets(self, hull, simplices):
        eqs = hull.equations
        nf = len(simplices)
        # union-find over hull simplices: neighbors sharing a hyperplane are one facet
        parent = list(range(nf))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(nf):
            for j in hull.neighbors[i]:
                if j < 0 or j <= i:
                    continue
                diff = np.abs(eqs[i] - eqs[j])
                if np.max(diff[:-1]) < 1e-8 and diff[-1] < 1e-8 * max(1.0, abs(eqs[i, -1])):
                    parent[find(int(j))] = find(i)
        groups = {}
        for i in range(nf):
            groups.setdefault(find(i), []).append(i)
        facets = []
        for members in groups.values():
            rep = members[0]
            normal = eqs[rep, :-1].copy()
            normal /= np.linalg.norm(normal)
            offset = -eqs[rep, -1]
            measure = sum(_simplex_facet_measure(self.vertices[simplices[i]]) for i in members)
            ids = np.unique(np.concatenate([simplices[i] for i in members]))
            facets.append(Facet(normal, offset, measure, ids))
        facets.sort(key=lambda f: tuple(np.round(f.normal, 12)))
        return facets

    def __len__(self):
        return len(self.vertices)

    @property
    def facet_normals(self):
        return np.array([f.normal for f in self.facets])

    @property
    def facet_offsets(self):
        return np.array([f.offset for f in self.facets])

    def min_offset(self):
        """Distance from the origin to the nearest facet plane (signed)."""
        return float(np.min(self.facet_offsets))

    def origin_interior(self, tol=REL_TOL):
        return self.min_offset() > tol * self.scale

    def interior_distance(self, point):
        p = np.asarray(point, dtype=float)
        return float(np.min(self.facet_offsets - self.facet_normals @ p))


class BarycentricPoint:
    """Interior point of a simplex by barycentric weights: positive, summing to one."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or len(w) < 2:
            raise GeometryError("barycentric weights must be a 1d array of length >= 2")
        if abs(float(np.sum(w)) - 1.0) > 1e-12:
            raise GeometryError(f"barycentric weights sum to {np.sum(w)!r}, expected 1")
        if np.any(w <= 0.0):
            raise GeometryError("barycentric weights must be strictly positive (interior point)")
        self.weights = w

    def __len__(self):
        return len(self.weights)

    def cartesian(self, simplex_vertices):
        return self.weights @ np.asarray(simplex_vertices, dtype=float)


# ---------------------------------------------------------------------------
# radial and support operations


def _unit(direction):
    v = np.asarray(direction, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0 or not np.isfinite(n):
        raise GeometryError("direction must be a nonzero finite vector")
    return v / n


def _halfspace_ray(normals, offsets, center, unit_dir):
    num = offsets - normals @ center
    if np.min(num) <= 0.0:
        raise NotInteriorError("center is not strictly inside the body")
    den = normals @ unit_dir
    mask = den > 0.0
    if not np.any(mask):
        raise GeometryError("ray never exits the body; input is unbounded or invalid")
    return float(np.min(num[mask] / den[mask]))


def radius(body, center, direction):
    """Euclidean distance from center to the boundary of body along direction.

    This is the gauge radius r_{B,p}(v) = sup{t > 0 : p + t v in B} for the
    unit vector v parallel to direction. The center must be strictly interior.
    """
    u = _unit(direction)
    p = np.asarray(center, dtype=float)
    if isinstance(body, Polygon2):
        return _halfspace_ray(body.normals, body.offsets, p, u)
    if isinstance(body, PolytopeN):
        return _halfspace_ray(body.facet_normals, body.facet_offsets, p, u)
    if isinstance(body, RadiusProfile):
        return _profile_radius(body, p, u)
    raise TypeError(f"unsupported body type {type(body).__name__}")


def _profile_radius(profile, center, unit_dir):
    pnorm = float(np.linalg.norm(center))
    if pnorm == 0.0:
        return profile(float(np.arctan2(unit_dir[1], unit_dir[0])))
    if pnorm >= profile(float(np.arctan2(center[1], center[0]))):
        raise NotInteriorError("center is not strictly inside the profile body")

    def gap(t):
        q = center + t * unit_dir
        return float(np.hypot(q[0], q[1])) - profile(float(np.arctan2(q[1], q[0])))

    hi = pnorm + 1.1 * profile.max_radius()
    while gap(hi) <= 0.0:
        hi *= 2.0
    return float(brentq(gap, 0.0, hi, xtol=1e-14))


def chord_length(body, center, direction):
    """Length of the full chord through center parallel to direction."""
    u = _unit(direction)
    return radius(body, center, u) + radius(body, center, -u)


def support(body, direction):
    """Support value h_B(x) = max over the body of <x, z>; 1-homogeneous in x."""
    x = np.asarray(direction, dtype=float)
    if isinstance(body, (Polygon2, PolytopeN)):
        return float(np.max(body.vertices @ x))
    if isinstance(body, RadiusProfile):
        theta = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
        vals = body(theta) * (np.cos(theta) * x[0] + np.sin(theta) * x[1])
        i = int(np.argmax(vals))
        h = theta[1] - theta[0]

        def neg(t):
            return -(body(t) * (np.cos(t) * x[0] + np.sin(t) * x[1]))

        res = minimize_scalar(neg, bounds=(theta[i] - h, theta[i] + h),
                              method="bounded", options={"xatol": 1e-13})
        return float(max(vals[i], -res.fun))
    raise TypeError(f"unsupported body type {type(body).__name__}")


def polar_radius(body, direction):
    """Gauge radius of the polar body along direction: 1 / h_B(u) for unit u."""
    u = _unit(direction)
    h = support(body, u)
    if h <= 0.0:
        raise NotInteriorError("origin is not interior, polar radius undefined")
    return 1.0 / h


def polytope_polar(poly):
    """Polar dual of a polytope with the origin strictly interior."""
    if not poly.origin_interior():
        raise NotInteriorError("polar dual needs the origin strictly inside")
    verts = np.array([f.normal / f.offset for f in poly.facets])
    return PolytopeN(verts)


# ---------------------------------------------------------------------------
# sections and volumes


def _pivoted_basis(normal):
    """Orthonormal basis of the hyperplane orthogonal to normal (pivoted Gram-Schmidt)."""
    nu = _unit(normal)
    d = len(nu)
    basis = [nu]
    for axis in np.argsort(np.abs(nu)):  # most orthogonal axes first
        e = np.zeros(d)
        e[axis] = 1.0
        w = e - sum((e @ b) * b for b in basis)
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            basis.append(w / norm)
        if len(basis) == d:
            break
    return np.column_stack(basis[1:])


def central_section(poly, normal):
    """Intersection of a polytope with the hyperplane through the origin
    orthogonal to normal, returned as a PolytopeN of dimension dim - 1 in an
    orthonormal coordinate frame of the hyperplane (the origin is preserved).
    """
    if not isinstance(poly, PolytopeN):
        raise TypeError("central_section expects a PolytopeN")
    if poly.dim < 2:
        raise GeometryError("sections need dimension >= 2")
    if not poly.origin_interior():
        raise NotInteriorError("central section needs the origin strictly inside")
    nu = _unit(normal)
    heights = poly.vertices @ nu
    tol = REL_TOL * poly.scale
    pts = [poly.vertices[np.abs(heights) <= tol]]
    ii, jj = poly.edges[:, 0], poly.edges[:, 1]
    hi, hj = heights[ii], heights[jj]
    crossing = ((hi > tol) & (hj < -tol)) | ((hi < -tol) & (hj > tol))
    if np.any(crossing):
        a, b = ii[crossing], jj[crossing]
        t = (hi[crossing] / (hi[crossing] - hj[crossing]))[:, None]
        pts.append(poly.vertices[a] + t * (poly.vertices[b] - poly.vertices[a]))
    pts = np.vstack(pts)
    if len(pts) < poly.dim:
        raise DegenerateSectionError("hyperplane misses the polytope interior")
    coords = pts @ _pivoted_basis(nu)
    if poly.dim == 2:
        lo, hi_ = float(np.min(coords)), float(np.max(coords))
        if hi_ - lo <= tol:
            raise DegenerateSectionError("1d section degenerated to a point")
        return PolytopeN(np.array([[lo], [hi_]]))
    try:
        return PolytopeN(coords)
    except GeometryError as exc:
        raise DegenerateSectionError(f"section is not full-dimensional: {exc}") from exc


def lebesgue_volume(poly_or_points):
    """Lebesgue volume of a polytope (exact up to floating point).

    Accepts a PolytopeN or a raw vertex array. Degenerate vertex sets return
    0.0 with a warning instead of raising, so sweeps over random data survive.
    """
    if isinstance(poly_or_points, PolytopeN):
        return poly_or_points._volume
    pts = np.asarray(poly_or_points, dtype=float)
    if pts.ndim != 2:
        raise GeometryError("expected an (m, d) vertex array")
    if pts.shape[1] == 1:
        return float(np.max(pts) - np.min(pts))
    try:
        return float(ConvexHull(pts).volume)
    except QhullError:
        warnings.warn("degenerate vertex set, volume 0", stacklevel=2)
        return 0.0


def is_centrally_symmetric(body, tol=1e-9):
    """True if the body equals its reflection through the origin (within tol)."""
    if isinstance(body, RadiusProfile):
        odd = np.abs(body.coeffs[body.ks % 2 == 1]).sum()
        return bool(odd <= tol * np.abs(body.coeffs).sum())
    if isinstance(body, (Polygon2, PolytopeN)):
        v = body.vertices
        gaps = np.linalg.norm(v[:, None, :] + v[None, :, :], axis=2)
        return bool(np.max(np.min(gaps, axis=1)) <= tol * max(body.scale, 1e-30))
    raise TypeError(f"unsupported body type {type(body).__name__}")


# ---------------------------------------------------------------------------
# stock shapes


def regular_polygon(k, circumradius=1.0, phase=0.0):
    """Regular k-gon centered at the origin with a vertex at angle phase."""
    if k < 3:
        raise GeometryError("a polygon needs k >= 3 vertices")
    ang = phase + 2.0 * np.pi * np.arange(k) / k
    return Polygon2(circumradius * np.column_stack([np.cos(ang), np.sin(ang)]))


def cube(n, half_side=1.0):
    """Hypercube [-h, h]^n as a PolytopeN."""
    if n < 1:
        raise GeometryError("dimension must be >= 1")
    corners = np.array(list(itertools.product((-half_side, half_side), repeat=n)), dtype=float)
    return PolytopeN(corners)


def interval(lo=-1.0, hi=1.0):
    return PolytopeN(np.array([[lo], [hi]], dtype=float))


def polygon_as_polytope(poly, center=(0.0, 0.0)):
    """Re-root a Polygon2 at center and return it as a 2d PolytopeN."""
    c = np.asarray(center, dtype=float)
    if poly.interior_distance(c) <= 0.0:
        raise NotInteriorError("center must be strictly inside the polygon")
    return PolytopeN(poly.vertices - c)


def icosphere(subdivisions=2):
    """Geodesic triangulation of the unit sphere: 20 * 4**s facets."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = [(-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
             (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
             (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1)]
    verts = [np.array(v, dtype=float) / np.linalg.norm(v) for v in verts]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    for _ in range(subdivisions):
        cache = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        faces = [tri for a, b, c in faces
                 for tri in ((a, midpoint(a, b), midpoint(a, c)),
                             (b, midpoint(b, c), midpoint(a, b)),
                             (c, midpoint(a, c), midpoint(b, c)),
                             (midpoint(a, b), midpoint(b, c), midpoint(a, c)))]
    return PolytopeN(np.array(verts))
