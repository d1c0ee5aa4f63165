"""Recursive self-volumes of convex polytopes.

The self-volume omega^(k) of a k-dimensional polytope with the origin inside
is defined by recursion over central hyperplane sections:

    omega^(1) = 2 for every segment containing the origin,
    omega^(k) = (1/k) * sum over facets F of
                measure(F) * omega^(k-1)(section(nu_F)) / measure(section(nu_F)),

where section(nu) is the central section orthogonal to the facet normal.
n * omega^(n) generalizes the planar self-perimeter; the value is invariant
under invertible linear maps, multiplicative under Cartesian products, equals
2^n on cubes and (n+1)^n / n! on simplices sectioned at the centroid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    BarycentricPoint,
    DegenerateSectionError,
    GeometryError,
    NotInteriorError,
    PolytopeN,
    central_section,
)

NORMAL_QUANTUM = 1e-12   # quantization of section-normal memo keys
MAX_DIM_DEFAULT = 5      # recursion cost grows fast with dimension
PRODUCT_VERTEX_GUARD = 100_000


@dataclass
class FacetContribution:
    facet_index: int
    facet_measure: float
    section_measure: float
    section_self_volume: float
    contribution: float   # facet_measure * section_self_volume / section_measure


@dataclass
class SelfVolumeResult:
    value: float
    dim: int
    facet_contributions: list[FacetContribution] = field(default_factory=list)


def _memo_key(normal):
    # sections through the origin satisfy section(nu) == section(-nu), so the
    # key uses a canonical sign: first significant component positive
    canon = normal
    for x in normal:
        if abs(x) > 1e-9:
            if x < 0.0:
                canon = -normal
            break
    return tuple(np.round(canon / NORMAL_QUANTUM).astype(np.int64).tolist())


def _omega(poly, chain):
    """Self-volume of a polytope with the origin strictly inside.

    chain carries the facet indices descended so far, for error reporting.
    Returns (value, rows) where rows hold the per-facet breakdown.
    """
    k = poly.dim
    if k == 1:
        return 2.0, []
    memo = {}
    rows = []
    total = 0.0
    for idx, f in enumerate(poly.facets):
        key = _memo_key(f.normal)
        if key not in memo:
            try:
                section = central_section(poly, f.normal)
            except DegenerateSectionError as exc:
                raise DegenerateSectionError(
                    f"degenerate section at facet chain {chain + (idx,)}: {exc}") from exc
            sub, _ = _omega(section, chain + (idx,))
            memo[key] = (section._volume, sub)
        sec_measure, sec_omega = memo[key]
        contribution = f.measure * sec_omega / sec_measure
        rows.append(FacetContribution(idx, f.measure, sec_measure, sec_omega, contribution))
        total += contribution
    return total / k, rows


def self_volume_recursive(poly, max_dim=MAX_DIM_DEFAULT):
    """Self-volume of a PolytopeN by the central-section recursion.

    Parameters
    ----------
    poly : PolytopeN with the origin strictly interior.
    max_dim : recursion guard; raise this explicitly for dimensions above 5.

    Returns
    -------
    SelfVolumeResult with the value and one FacetContribution row per facet
    of the top-level polytope (value = sum of contributions / dim).
    """
    if not isinstance(poly, PolytopeN):
        raise TypeError("self_volume_recursive expects a PolytopeN")
    if poly.dim > max_dim:
        raise GeometryError(
            f"dimension {poly.dim} exceeds max_dim={max_dim}; pass max_dim explicitly to override")
    if not poly.origin_interior():
        raise NotInteriorError("self-volume needs the origin strictly inside the polytope")
    value, rows = _omega(poly, ())
    return SelfVolumeResult(value, poly.dim, rows)


def hypercube_self_volume(n):
    """Closed form for the cube [-h, h]^n: exactly 2^n, any h."""
    n = int(n)
    if n < 1:
        raise GeometryError("dimension must be >= 1")
    return 2.0 ** n


def simplex_self_volume(n, bary):
    """Closed-form self-volume of an n-simplex sectioned at a barycentric point.

    omega = (2/n!) * sum over ordered tuples (k_1, ..., k_{n-1}) of pairwise
    distinct vertex indices of prod_{m=1}^{n-1} 1 / (1 - lambda_{k_1} - ... - lambda_{k_m}).

    The minimum over interior points is (n+1)^n / n!, attained at the centroid.
    """
    n = int(n)
    if n < 1:
        raise GeometryError("dimension must be >= 1")
    if not isinstance(bary, BarycentricPoint):
        bary = BarycentricPoint(bary)
    lam = bary.weights
    if len(lam) != n + 1:
        raise GeometryError(f"need {n + 1} barycentric weights for an {n}-simplex, got {len(lam)}")
    total = 0.0
    for tup in itertools.permutations(range(n + 1), n - 1):
        partial = 0.0
        term = 1.0
        for k in tup:
            partial += lam[k]
            term /= 1.0 - partial
        total += term
    return 2.0 / math.factorial(n) * total


def product_self_volume(a, b):
    """Self-volume of a Cartesian product from the factors' results."""
    return a.value * b.value


def cartesian_product(p, q):
    """Cartesian product of two polytopes: all concatenated vertex pairs."""
    if not isinstance(p, PolytopeN) or not isinstance(q, PolytopeN):
        raise TypeError("cartesian_product expects two PolytopeN")
    m = len(p.vertices) * len(q.vertices)
    if m > PRODUCT_VERTEX_GUARD:
        raise GeometryError(f"product would have {m} vertices (guard {PRODUCT_VERTEX_GUARD})")
    left = np.repeat(p.vertices, len(q.vertices), axis=0)
    right = np.tile(q.vertices, (len(p.vertices), 1))
    return PolytopeN(np.hstack([left, right]))


def affine_image(poly, matrix):
    """Image of a polytope under an invertible linear map (facets rebuilt)."""
    m = np.asarray(matrix, dtype=float)
    d = poly.dim
    if m.shape != (d, d):
        raise GeometryError(f"matrix must be {d}x{d}, got {m.shape}")
    if abs(np.linalg.det(m)) <= 1e-12:
        raise GeometryError("matrix is singular within tolerance 1e-12")
    return PolytopeN(poly.vertices @ m.T)
