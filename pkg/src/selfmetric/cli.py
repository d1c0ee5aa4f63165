"""Command-line front end.

Subcommands: perimeter, volume, center, kgon-table, alexandrov,
invariance-check, conjecture-search. Outputs are CSV or JSON files (stdout
when no --out is given); failures print one machine-readable JSON object to
stderr and exit nonzero. All randomness flows from the --seed flag, so
identical invocations produce byte-identical outputs. SELFMETRIC_THREADS
sets the worker-pool width for the batch commands; results are collected in
submission order, so the pool size never changes the output.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .alexandrov import ClosureError, FourierDensityError, general_n_forward, reconstruct
from .centers import ConvergenceError, optimal_center_2d
from .geometry import (GeometryError, Polygon2, PolytopeN, RadiusProfile,
                       regular_polygon)
from .perimeter2 import (busemann_perimeter_polygon, kgon_self_perimeter,
                         self_perimeter_polygon, self_perimeter_smooth)
from .selfvolume import affine_image, self_volume_recursive
from .shapeio import ShapeFormatError, load_density, load_shape

MIN_NODES = 64
MAX_TOLERANCE = 1e-2


@dataclass
class RunConfig:
    """One parsed invocation; validate() enforces the shared invariants."""
    command: str
    shape: str = None
    phi: str = None
    out: str = None
    facet_csv: str = None
    center: str = None
    variant: str = "directed"
    nodes: int = 512
    tolerance: float = 1e-6
    seed: int = 0
    max_dim: int = 5
    restarts: int = 5
    k_max: int = 16
    epsilon: float = None
    sign: str = "plus"
    trials: int = 20
    steps: int = 40
    dim: int = 2

    def validate(self):
        if self.nodes < MIN_NODES:
            raise ValueError(f"nodes must be at least {MIN_NODES}, got {self.nodes}")
        if not 0.0 < self.tolerance <= MAX_TOLERANCE:
            raise ValueError(f"tolerance must lie in (0, {MAX_TOLERANCE}], got {self.tolerance}")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if self.command == "kgon-table" and self.k_max < 3:
            raise ValueError("k-max must be at least 3")
        if self.command == "conjecture-search" and not 2 <= self.dim <= 4:
            raise ValueError("conjecture search supports dimensions 2 to 4")
        if self.trials < 1 or self.steps < 0:
            raise ValueError("trials must be positive and steps nonnegative")


def _pool_width():
    raw = os.environ.get("SELFMETRIC_THREADS", "").strip()
    if not raw:
        return 1
    try:
        width = int(raw)
    except ValueError:
        raise ValueError(f"SELFMETRIC_THREADS must be a positive integer, got {raw!r}")
    if width < 1:
        raise ValueError(f"SELFMETRIC_THREADS must be a positive integer, got {raw!r}")
    return width


def _pool_map(fn, items):
    # order-preserving map; pool width never affects results, only wall time
    items = list(items)
    width = _pool_width()
    if width == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=width) as pool:
        return list(pool.map(fn, items))


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.17g}"
    return "" if x is None else str(x)


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    if path is None:
        sys.stdout.write(buf.getvalue())
    else:
        Path(path).write_text(buf.getvalue())
        print(f"wrote {path}")


def _write_json(path, doc):
    text = json.dumps(doc, indent=1) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
        print(f"wrote {path}")


def _parse_point(text):
    try:
        coords = [float(p) for p in text.split(",")]
    except ValueError:
        raise ValueError(f"malformed point {text!r}; expected comma-separated numbers")
    return np.array(coords)


def _cmd_perimeter(cfg):
    body = load_shape(cfg.shape)
    body_id = Path(cfg.shape).stem
    rows = []
    if isinstance(body, Polygon2):
        center = _parse_point(cfg.center) if cfg.center else body.centroid
        if cfg.center and len(center) != 2:
            raise ValueError("--center needs two coordinates for a polygon")
        variants = ("directed", "busemann") if cfg.variant == "both" else (cfg.variant,)
        for variant in variants:
            fn = self_perimeter_polygon if variant == "directed" else busemann_perimeter_polygon
            res = fn(body, center)
            rows.append([body_id, variant, res.method, res.value, None])
    elif isinstance(body, RadiusProfile):
        if cfg.variant not in ("directed", "both"):
            raise ValueError("smooth profiles support only the directed variant")
        res = self_perimeter_smooth(body, nodes=cfg.nodes)
        rows.append([body_id, "directed", res.method, res.value, res.node_count])
    else:
        measure = general_n_forward(body, max_dim=cfg.max_dim)
        rows.append([body_id, "directed", "surface-measure", measure.total_mass, None])
    _write_csv(cfg.out, ["body_id", "variant", "method", "value", "nodes"], rows)
    return 0


def _cmd_volume(cfg):
    body = load_shape(cfg.shape)
    if not isinstance(body, PolytopeN):
        raise ValueError('volume needs a shape of type "polytope" with the origin interior')
    res = self_volume_recursive(body, max_dim=cfg.max_dim)
    doc = {
        "value": res.value,
        "dim": res.dim,
        "facets": [
            {"index": c.facet_index, "facet_measure": c.facet_measure,
             "section_measure": c.section_measure,
             "section_self_volume": c.section_self_volume,
             "contribution": c.contribution}
            for c in res.facet_contributions
        ],
    }
    _write_json(cfg.out, doc)
    if cfg.facet_csv:
        _write_csv(cfg.facet_csv,
                   ["facet_index", "facet_measure", "section_measure",
                    "section_self_volume", "contribution"],
                   [[c.facet_index, c.facet_measure, c.section_measure,
                     c.section_self_volume, c.contribution]
                    for c in res.facet_contributions])
    return 0


def _interior_start(poly, rng):
    lo = np.min(poly.vertices, axis=0)
    hi = np.max(poly.vertices, axis=0)
    for _ in range(10_000):
        p = lo + rng.random(2) * (hi - lo)
        if poly.interior_distance(p) > 1e-9 * poly.scale:
            return p
    raise RuntimeError("could not sample an interior start point")


def _cmd_center(cfg):
    body = load_shape(cfg.shape)
    if not isinstance(body, Polygon2):
        raise ValueError('center optimization needs a shape of type "polygon2"')
    if cfg.variant not in ("directed", "busemann"):
        raise ValueError("variant must be directed or busemann")

    def solve(i):
        run_seed = cfg.seed + i
        start = body.centroid if i == 0 else _interior_start(body, np.random.default_rng(run_seed))
        res = optimal_center_2d(body, cfg.variant, start=start)
        return [run_seed, float(res.optimum[0]), float(res.optimum[1]),
                res.value, res.iterations]

    rows = _pool_map(solve, range(cfg.restarts))
    _write_csv(cfg.out, ["seed", "optimum_x", "optimum_y", "value", "iterations"], rows)
    if cfg.out is not None:
        best = min(rows, key=lambda r: r[3])
        print(f"best center ({best[1]:.12g}, {best[2]:.12g}) value {best[3]:.12g}")
    return 0


def _cmd_kgon_table(cfg):
    def row(k):
        closed = kgon_self_perimeter(k)
        exact = self_perimeter_polygon(regular_polygon(k), np.zeros(2)).value
        return [k, closed, exact, abs(closed - exact)]

    rows = _pool_map(row, range(3, cfg.k_max + 1))
    _write_csv(cfg.out, ["k", "closed_form", "polygon_exact", "abs_diff"], rows)
    return 0


def _cmd_alexandrov(cfg):
    from .svgplot import polar_svg
    phi = load_density(cfg.phi, epsilon=cfg.epsilon)
    sign = 1 if cfg.sign == "plus" else -1
    res = reconstruct(phi, sign=sign, nodes=cfg.nodes)
    doc = {
        "epsilon": phi.epsilon,
        "sign": cfg.sign,
        "phi0": res.phi0,
        "residual": res.residual,
        "residual_classical": res.residual_classical,
        "radius_coeffs": [[int(k), float(c.real), float(c.imag)]
                          for k, c in zip(res.radius.ks, res.radius.coeffs)],
        "notes": list(res.notes),
        "svg": polar_svg(res.radius, title="reconstructed radius"),
    }
    _write_json(cfg.out, doc)
    if cfg.out is not None:
        print(f"phi0 {res.phi0:.12g} residual {res.residual:.12g}")
    return 0


def _cmd_invariance_check(cfg):
    body = load_shape(cfg.shape)
    if not isinstance(body, PolytopeN):
        raise ValueError('invariance check needs a shape of type "polytope"')
    base = self_volume_recursive(body, max_dim=cfg.max_dim).value
    n = body.dim

    def trial(t):
        rng = np.random.default_rng((cfg.seed, t))
        while True:
            mat = rng.normal(size=(n, n))
            if abs(np.linalg.det(mat)) > 1e-3:
                break
        value = self_volume_recursive(affine_image(body, mat), max_dim=cfg.max_dim).value
        return [t, value, abs(value - base) / abs(base)]

    rows = _pool_map(trial, range(cfg.trials))
    _write_csv(cfg.out, ["trial", "value", "rel_deviation"], rows)
    worst = max(r[2] for r in rows)
    if worst > cfg.tolerance:
        raise GeometryError(f"affine invariance violated: worst relative deviation {worst:.3e}")
    if cfg.out is not None:
        print(f"invariant within {worst:.3e} over {cfg.trials} maps")
    return 0


def _conjectured_min(n):
    # product of triangles (and one interval when n is odd): 3 per 2d factor,
    # 2 per interval factor
    if n % 2 == 0:
        return 3.0 ** (n // 2)
    return 2.0 * 3.0 ** ((n - 1) // 2)


def _ccs_hull(points):
    return PolytopeN(np.vstack([points, -points]))


def _climb(points, rng, steps, sign, max_dim):
    # local hill climb on the self-volume over CCS vertex perturbations;
    # sign +1 maximizes, -1 minimizes
    best_pts = points
    best = self_volume_recursive(_ccs_hull(points), max_dim=max_dim).value
    rejected = 0
    for _ in range(steps):
        j = rng.integers(0, len(best_pts))
        cand = best_pts.copy()
        cand[j] = cand[j] + 0.1 * rng.normal(size=cand.shape[1])
        try:
            value = self_volume_recursive(_ccs_hull(cand), max_dim=max_dim).value
        except (GeometryError, ValueError):
            rejected += 1
            continue
        if sign * (value - best) > 0.0:
            best_pts, best = cand, value
    return best, rejected


def _cmd_conjecture_search(cfg):
    n = cfg.dim

    def trial(t):
        rng = np.random.default_rng((cfg.seed, t))
        for _ in range(50):
            pts = rng.normal(size=(n + 1 + int(rng.integers(0, 3)), n))
            try:
                self_volume_recursive(_ccs_hull(pts), max_dim=cfg.max_dim)
                break
            except (GeometryError, ValueError):
                continue
        hi, rej_hi = _climb(pts, rng, cfg.steps, +1, cfg.max_dim)
        lo, rej_lo = _climb(pts, rng, cfg.steps, -1, cfg.max_dim)
        return hi, lo, rej_hi + rej_lo

    results = _pool_map(trial, range(cfg.trials))
    max_found = max(r[0] for r in results)
    min_found = min(r[1] for r in results)
    doc = {
        "dim": n,
        "trials": cfg.trials,
        "steps": cfg.steps,
        "seed": cfg.seed,
        "max_found": max_found,
        "min_found": min_found,
        "conjectured_max": 2.0 ** n,
        "conjectured_min": _conjectured_min(n),
        "within_conjecture": bool(max_found <= 2.0 ** n + cfg.tolerance
                                  and min_found >= _conjectured_min(n) - cfg.tolerance),
        "degenerate_rejections": int(sum(r[2] for r in results)),
    }
    _write_json(cfg.out, doc)
    return 0


_COMMANDS = {
    "perimeter": _cmd_perimeter,
    "volume": _cmd_volume,
    "center": _cmd_center,
    "kgon-table": _cmd_kgon_table,
    "alexandrov": _cmd_alexandrov,
    "invariance-check": _cmd_invariance_check,
    "conjecture-search": _cmd_conjecture_search,
}


def run(cfg):
    """Execute one config; returns the process exit code."""
    try:
        cfg.validate()
        return _COMMANDS[cfg.command](cfg)
    except ShapeFormatError as exc:
        return _fail("shape-format", str(exc), field=exc.field)
    except (FourierDensityError, ClosureError) as exc:
        return _fail("density", str(exc))
    except GeometryError as exc:
        return _fail("geometry", str(exc))
    except ConvergenceError as exc:
        return _fail("convergence", str(exc))
    except FileNotFoundError as exc:
        return _fail("io", str(exc))
    except (ValueError, RuntimeError) as exc:
        return _fail("config", str(exc))


def _fail(kind, message, field=None):
    doc = {"error": {"type": kind, "message": message}}
    if field is not None:
        doc["error"]["field"] = field
    print(json.dumps(doc), file=sys.stderr)
    return 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="selfmetric",
        description="Self-perimeters, self-volumes, optimal centers, and the "
                    "inverse surface-measure problem for convex bodies.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", help="output file (stdout when omitted)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tolerance", type=float, default=1e-6)
        return p

    p = add("perimeter", "self-perimeter of a body, optionally off-center")
    p.add_argument("--shape", required=True)
    p.add_argument("--center", help="x,y base point (polygons; default centroid)")
    p.add_argument("--variant", choices=["directed", "busemann", "both"], default="directed")
    p.add_argument("--nodes", type=int, default=512)
    p.add_argument("--max-dim", dest="max_dim", type=int, default=5)

    p = add("volume", "recursive self-volume of a polytope")
    p.add_argument("--shape", required=True)
    p.add_argument("--max-dim", dest="max_dim", type=int, default=5)
    p.add_argument("--csv", dest="facet_csv", help="also write the facet breakdown CSV")

    p = add("center", "perimeter-minimizing interior point of a polygon")
    p.add_argument("--shape", required=True)
    p.add_argument("--variant", choices=["directed", "busemann"], default="directed")
    p.add_argument("--restarts", type=int, default=5)

    p = add("kgon-table", "closed forms vs exact sums for regular k-gons")
    p.add_argument("--k-max", dest="k_max", type=int, default=16)

    p = add("alexandrov", "perturbative inverse problem for a target density")
    p.add_argument("--phi", required=True, help="density JSON file")
    p.add_argument("--epsilon", type=float, help="overrides the epsilon stored in the file")
    p.add_argument("--sign", choices=["plus", "minus"], default="plus")
    p.add_argument("--nodes", type=int, default=4096)

    p = add("invariance-check", "self-volume under random linear maps")
    p.add_argument("--shape", required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--max-dim", dest="max_dim", type=int, default=5)

    p = add("conjecture-search", "random search for extremal CCS self-volumes")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--max-dim", dest="max_dim", type=int, default=5)

    return parser


def main(argv=None):
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    cfg = RunConfig(command=command, **args)
    sys.exit(run(cfg))


if __name__ == "__main__":
    main()
