"""
Generalized holes of the real simple roots.

The real simple roots of the fixed-point algebra are represented by points
of the fixed-lattice space: every lattice vector (a "fix" point) and every
dual vector of norm 2/N mod 2 (a "dual" point, which carries an extra squared
distance 2 - 2/N). A generalized hole is a local maximum of the distance to
this point set: its vertices are the points at generalized distance equal to
the radius, and none is closer.

Every hole has a fix vertex, so the search anchors one vertex at the origin:
candidate vertex sets are cliques of pairwise admissible distances among the
points near the origin. A vectorized float pass discards the hopeless ones
and every survivor is re-solved exactly before it becomes a :class:`Hole`.
Holes are reported once per fundamental cell, translated so that their
centres lie in [0, 1)^n of the basis coefficients.
"""

import math
import random
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from sympy import Matrix, Rational, factorial, sqrt
from tqdm import tqdm

from .error_handling import (DegenerateCentreError, InadmissibleDistanceError, InvalidParameterError,
                             UnknownComponentError, VerificationError, WindowTooSmallError)
from .export_utils import format_rational, load_cached, save_cached
from .golden_tables import APPENDIX_A, POINT_GROUP_ORDER
from .lattice import GramLattice, exact_det, exact_solve, fixed_lattice, residue_class_reps, short_vectors
from .liealg import DynkinDiagram, build_diagram, catalog_lookup, diagram_from_points
from .logging_utils import get_logger, progress_enabled
from .qseries import m_for

logger = get_logger()

FIX = "fix"
DUAL = "dual"
DEFAULT_WINDOW = (-2, 3)
BATCH_SIZE = 4096
_EPS = 1e-7

Coeffs = Tuple[Fraction, ...]


@dataclass(frozen=True, order=True)
class RPoint:
    """A real simple root as a point of the fixed-lattice space.

    ``offset`` is the extra squared distance of the point: 0 for fix
    points and 2 - 2/N for dual points.
    """
    kind: str
    coeffs: Coeffs
    norm: Fraction
    offset: Fraction

    def to_json(self) -> list:
        return [self.kind, [format_rational(c) for c in self.coeffs]]


def make_point(kind: str, coeffs: Sequence, lattice: GramLattice, N: int) -> RPoint:
    coeffs = tuple(Fraction(c) for c in coeffs)
    offset = Fraction(0) if kind == FIX else 2 - Fraction(2, N)
    return RPoint(kind, coeffs, lattice.norm(coeffs), offset)


def _retarget(point: RPoint, shift: Sequence[Fraction], lattice: GramLattice, N: int) -> RPoint:
    return make_point(point.kind, [c + s for c, s in zip(point.coeffs, shift)], lattice, N)


@dataclass(frozen=True)
class HoleVolume:
    """Volume of a hole in units of ((2M)! sqrt(N)^M)^(-1).

    ``unit`` comes from the simplex determinants; ``formula_unit2`` is the
    square of the unit predicted by the catalog data of the diagram (None
    when a component has no catalog formula).
    """
    unit: Fraction
    formula_unit2: Optional[Fraction]
    volume: object

    @property
    def formula_agrees(self) -> Optional[bool]:
        if self.formula_unit2 is None:
            return None
        return self.formula_unit2 == self.unit * self.unit


@dataclass(frozen=True)
class Hole:
    """A generalized hole: vertices, exact centre and squared radius, diagram and volume."""
    vertices: Tuple[RPoint, ...]
    centre: Coeffs
    radius2: Fraction
    diagram: DynkinDiagram
    volume: HoleVolume

    @property
    def label(self) -> str:
        return self.diagram.label

    @property
    def is_affine(self) -> bool:
        return self.radius2 == 2

    @property
    def fix_count(self) -> int:
        return sum(1 for v in self.vertices if v.kind == FIX)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "radius2": format_rational(self.radius2),
            "centre": [format_rational(c) for c in self.centre],
            "vertices": [v.to_json() for v in self.vertices],
            "unit_volume": format_rational(self.volume.unit),
        }


# -- the point set ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def dual_class_reps(N: int) -> Tuple[Coeffs, ...]:
    """Representatives in [0, 1)^n of the dual classes whose points have norm 2/N mod 2."""
    lattice = fixed_lattice(N)
    classes = residue_class_reps(lattice)
    reps = classes.get(Fraction(1, N), [])
    return tuple(sorted(tuple(c - math.floor(c) for c in cls.representative) for cls in reps))


def build_R(N: int, window: Tuple[int, int] = DEFAULT_WINDOW) -> List[RPoint]:
    """Every fix and dual point with basis coefficients in the box [lo, hi)^n.

    Dual points are the translates of the class representatives of
    :func:`dual_class_reps`, so exactly those with half-norm 1/N mod 1.
    """
    lattice = fixed_lattice(N)
    lo, hi = window
    if hi <= lo:
        raise InvalidParameterError(f"empty window {window}")
    points = []
    for k in product(range(lo, hi), repeat=lattice.rank):
        points.append(make_point(FIX, k, lattice, N))
    for rep in dual_class_reps(N):
        for k in product(range(lo, hi), repeat=lattice.rank):
            points.append(make_point(DUAL, [r + x for r, x in zip(rep, k)], lattice, N))
    logger.info(f"Built R for N={N}", extra={"window": list(window), "points": len(points)})
    return points


def local_points(N: int, x: Sequence, fix_bound, dual_bound, lattice: Optional[GramLattice] = None) -> List[RPoint]:
    """R-points within Euclidean squared distance ``fix_bound`` (fix) or ``dual_bound`` (dual) of x."""
    lattice = lattice or fixed_lattice(N)
    x = [Fraction(v) for v in x]
    found = []
    for v in short_vectors(lattice, fix_bound, offset=[-a for a in x]):
        found.append(make_point(FIX, [c + a for c, a in zip(v.coeffs, x)], lattice, N))
    for rep in dual_class_reps(N):
        for v in short_vectors(lattice, dual_bound, offset=[r - a for r, a in zip(rep, x)]):
            found.append(make_point(DUAL, [c + a for c, a in zip(v.coeffs, x)], lattice, N))
    return found


def generalized_distance2(lattice: GramLattice, point: RPoint, x: Sequence[Fraction]) -> Fraction:
    return lattice.norm([c - a for c, a in zip(point.coeffs, x)]) + point.offset


def _dual_reach(N: int) -> Fraction:
    """Squared Euclidean reach of dual points that can matter near a hole with a fix vertex at 0."""
    reach = (math.sqrt(2) + math.sqrt(2 / N)) ** 2
    return max(4 + Fraction(2, N), Fraction(math.ceil(reach * 1000) + 1, 1000))


def admissible_distances(N: int) -> Dict[Tuple[str, str], frozenset]:
    """Squared distances (times N^2) a pair of hole vertices can have.

    A fix-dual pair at 4 + 2/N has a Cartan entry -N, which only a finite or
    affine diagram with length ratio N <= 3 allows.
    """
    fix_dual = {2 * N * N + 2 * N}
    if N <= 3:
        fix_dual.add(4 * N * N + 2 * N)
    return {
        (FIX, FIX): frozenset({4 * N * N, 6 * N * N, 8 * N * N}),
        (DUAL, DUAL): frozenset({4 * N, 6 * N, 8 * N}),
        (FIX, DUAL): frozenset(fix_dual),
        (DUAL, FIX): frozenset(fix_dual),
    }


# -- exact helpers ----------------------------------------------------------------------


def affine_weights(points: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Weights w with sum w_i p_i = x and sum w_i = 1, or None if x is off the affine span.

    The points must be affinely independent.
    """
    n = len(x)
    k = len(points)
    rows = [[Fraction(p[i]) for p in points] for i in range(n)] + [[Fraction(1)] * k]
    rhs = [Fraction(v) for v in x] + [Fraction(1)]
    if k == n + 1:
        return exact_solve(rows, rhs)
    normal = [[sum(rows[r][i] * rows[r][j] for r in range(n + 1)) for j in range(k)] for i in range(k)]
    target = [sum(rows[r][i] * rhs[r] for r in range(n + 1)) for i in range(k)]
    w = exact_solve(normal, target)
    if w is None:
        return None
    if any(sum(rows[r][i] * w[i] for i in range(k)) != rhs[r] for r in range(n + 1)):
        return None
    return w


def faces(hole: Hole) -> List[Tuple[int, ...]]:
    """Vertex index sets of the facets of a hole.

    A finite hole is a simplex and loses one vertex per facet; an affine hole
    loses one vertex of every component.
    """
    n = len(hole.vertices)
    if not hole.is_affine:
        return [tuple(j for j in range(n) if j != i) for i in range(n)]
    result = []
    for removed in product(*hole.diagram.components):
        gone = set(removed)
        result.append(tuple(j for j in range(n) if j not in gone))
    return result


def hole_volume(vertices: Sequence[RPoint], centre: Coeffs, radius2: Fraction, diagram: DynkinDiagram,
                N: int) -> HoleVolume:
    """Exact volume of a hole from its simplices, checked against the catalog formula.

    Raises:
        VerificationError: if both values exist and disagree.
    """
    M = m_for(N)
    scale = Fraction(N) ** M
    positions = [v.coeffs for v in vertices]
    if radius2 < 2:
        base = positions[0]
        det = exact_det([[a - b for a, b in zip(p, base)] for p in positions[1:]])
        unit = abs(det) * scale
    else:
        stub = Hole(tuple(vertices), centre, radius2, diagram, HoleVolume(Fraction(0), None, 0))
        unit = Fraction(0)
        for face in faces(stub):
            unit += abs(exact_det([[a - b for a, b in zip(positions[j], centre)] for j in face]))
        unit *= scale
    formula = _formula_unit2(diagram, N, scale, affine=radius2 == 2)
    if formula is not None and formula != unit * unit:
        raise VerificationError(f"volume formula disagrees for {diagram.label}",
                                [{"label": diagram.label, "simplex_unit": str(unit), "formula_unit2": str(formula)}])
    volume = Rational(unit.numerator, unit.denominator) / (factorial(2 * M) * sqrt(N) ** M)
    return HoleVolume(unit=unit, formula_unit2=formula, volume=volume)


def _formula_unit2(diagram: DynkinDiagram, N: int, scale: Fraction, affine: bool) -> Optional[Fraction]:
    """Squared unit volume from rho^2 (finite) or h-dual (affine) and the component determinants."""
    if diagram.classification not in ("finite", "affine"):
        return None
    total_rho2 = Fraction(0)
    hdual2 = Fraction(1)
    dets = Fraction(1)
    try:
        for label in diagram.component_labels:
            value, det = catalog_lookup(label, N=N)
            dets *= det
            if affine:
                hdual2 *= value * value
            else:
                total_rho2 += value
    except UnknownComponentError:
        return None
    if affine:
        return hdual2 * dets * scale
    return total_rho2 * dets * scale


# -- enumeration ------------------------------------------------------------------------


@dataclass
class _SearchContext:
    N: int
    lattice: GramLattice
    points: List[RPoint]
    coords: np.ndarray
    norms: np.ndarray
    offsets: np.ndarray
    gram: np.ndarray


def _context(N: int, lattice: GramLattice) -> _SearchContext:
    zero = [0] * lattice.rank
    points = local_points(N, zero, 8, _dual_reach(N), lattice)
    return _SearchContext(
        N=N, lattice=lattice, points=points,
        coords=np.array([[float(c) for c in p.coeffs] for p in points]),
        norms=np.array([float(p.norm) for p in points]),
        offsets=np.array([float(p.offset) for p in points]),
        gram=np.array([[float(x) for x in row] for row in lattice.gram]),
    )


def _neighbour_graph(ctx: _SearchContext) -> nx.Graph:
    """Points that can share a hole with the origin, joined when they can share one with each other."""
    N = ctx.N
    allowed = admissible_distances(N)
    gram = np.array([[int(x) for x in row] for row in ctx.lattice.gram], dtype=np.int64)
    scaled = np.array([[int(c * N) for c in p.coeffs] for p in ctx.points], dtype=np.int64)
    norms = np.einsum("ij,jk,ik->i", scaled, gram, scaled)
    kinds = [p.kind for p in ctx.points]
    nbrs = [i for i, p in enumerate(ctx.points) if p.norm != 0 and int(norms[i]) in allowed[(FIX, p.kind)]]
    g = nx.Graph()
    g.add_nodes_from(nbrs)
    if not nbrs:
        return g
    sub = scaled[nbrs]
    cross = sub @ gram @ sub.T
    d2 = norms[nbrs][:, None] + norms[nbrs][None, :] - 2 * cross
    for a in range(len(nbrs)):
        for b in range(a + 1, len(nbrs)):
            i, j = nbrs[a], nbrs[b]
            if int(d2[a, b]) in allowed[(kinds[i], kinds[j])]:
                g.add_edge(i, j)
    return g


def _float_survivors(ctx: _SearchContext, cliques: np.ndarray) -> List[Tuple[Tuple[int, ...], np.ndarray]]:
    """Cliques whose float circumcentre has radius^2 <= 2 and an empty generalized sphere.

    Column 0 of ``cliques`` is the origin anchor; the other 2M vertices give
    the square equidistance system.
    """
    body = cliques[:, 1:]
    P = ctx.coords[body]
    A = 2.0 * P @ ctx.gram
    b = ctx.norms[body] + ctx.offsets[body]
    ok = np.abs(np.linalg.det(A)) > 1e-8
    if not ok.any():
        return []
    cliques, A, b = cliques[ok], A[ok], b[ok]
    centres = np.linalg.solve(A, b[..., None])[..., 0]
    r2 = np.einsum("ki,ij,kj->k", centres, ctx.gram, centres)
    keep = r2 <= 2 + _EPS
    cliques, centres, r2 = cliques[keep], centres[keep], r2[keep]
    if not len(cliques):
        return []
    cross = centres @ ctx.gram @ ctx.coords.T
    d2 = ctx.norms[None, :] - 2 * cross + r2[:, None] + ctx.offsets[None, :]
    empty = (d2 >= r2[:, None] - _EPS).all(axis=1)
    return [(tuple(int(i) for i in q), c) for q, c in zip(cliques[empty], centres[empty])]


def _exact_hole(ctx: _SearchContext, clique: Sequence[int], centre_hint: np.ndarray) -> Optional[Hole]:
    """Re-solve a candidate exactly; return the hole it spans or None."""
    lattice, N = ctx.lattice, ctx.N
    M = m_for(N)
    n = lattice.rank
    # the anchor sits at the origin and adds no equation
    verts = [ctx.points[i] for i in clique[1:]]
    rows = [[2 * sum(lattice.gram[i][j] * v.coeffs[j] for j in range(n)) for i in range(n)] for v in verts]
    rhs = [v.norm + v.offset for v in verts]
    centre = exact_solve(rows, rhs)
    if centre is None:
        return None
    radius2 = lattice.norm(centre)
    if radius2 > 2:
        return None
    cross = ctx.coords @ ctx.gram @ centre_hint
    approx = ctx.norms - 2 * cross + float(radius2) + ctx.offsets
    sphere = []
    for i in np.nonzero(approx <= float(radius2) + 1e-6)[0]:
        d2 = generalized_distance2(lattice, ctx.points[i], centre)
        if d2 < radius2:
            return None
        if d2 == radius2:
            sphere.append(ctx.points[i])
    sphere.sort()
    if radius2 < 2 and len(sphere) != 2 * M + 1:
        logger.debug("Degenerate finite candidate", extra={"vertices": len(sphere)})
        return None
    try:
        data = diagram_from_points(sphere, N, lattice)
    except InadmissibleDistanceError:
        return None
    diagram = build_diagram(data, N)
    if radius2 < 2:
        weights = affine_weights([v.coeffs for v in sphere], centre)
        if weights is None or any(w <= 0 for w in weights):
            return None
    else:
        for comp in diagram.components:
            weights = affine_weights([sphere[j].coeffs for j in comp], centre)
            if weights is None or any(w <= 0 for w in weights):
                return None
    shift = [Fraction(-math.floor(c)) for c in centre]
    moved = tuple(_retarget(v, shift, lattice, N) for v in sphere)
    centre = tuple(c + s for c, s in zip(centre, shift))
    volume = hole_volume(moved, centre, radius2, diagram, N)
    return Hole(vertices=moved, centre=centre, radius2=radius2, diagram=diagram, volume=volume)


def _check_reach(lattice: GramLattice, window: Tuple[int, int]) -> None:
    """The window must hold every vertex of a hole whose centre lies in the unit cell."""
    lo, hi = window
    for i in range(lattice.rank):
        reach = math.sqrt(2 * float(lattice.dual_gram[i][i]))
        if -reach <= lo or 1 + reach >= hi:
            raise WindowTooSmallError(
                f"window {window} does not contain the reach {reach:.3f} of coordinate {i}")


def _validate(holes: Sequence[Hole], N: int, window: Tuple[int, int]) -> List[Dict[str, str]]:
    """Structural checks on a finished enumeration; returns the anomalies."""
    M = m_for(N)
    lo, hi = window
    anomalies = []
    for h in holes:
        kind = h.diagram.classification
        if (h.radius2 < 2) != (kind == "finite") or (h.radius2 == 2) != (kind == "affine"):
            anomalies.append({"label": h.label, "radius2": str(h.radius2), "classification": kind})
        if kind == "finite":
            rho2 = Fraction(0)
            try:
                for label in h.diagram.component_labels:
                    rho2 += catalog_lookup(label, N=N)[0]
                if h.radius2 != 2 - 1 / rho2:
                    anomalies.append({"label": h.label, "radius2": str(h.radius2), "rho2": str(rho2)})
            except UnknownComponentError:
                anomalies.append({"label": h.label, "error": "unknown component"})
        if h.fix_count < M + 1:
            anomalies.append({"label": h.label, "fix_vertices": str(h.fix_count)})
        for v in h.vertices:
            if any(c < lo or c >= hi for c in v.coeffs):
                raise WindowTooSmallError(f"hole {h.label} has a vertex outside the window {window}")
    return anomalies


def _holes_from_cache(N: int, payload: dict) -> List[Hole]:
    lattice = fixed_lattice(N)
    holes = []
    for item in payload["holes"]:
        verts = [make_point(kind, [Fraction(c) for c in coeffs], lattice, N) for kind, coeffs in item["vertices"]]
        centre = tuple(Fraction(c) for c in item["centre"])
        radius2 = Fraction(item["radius2"])
        diagram = build_diagram(diagram_from_points(verts, N, lattice), N)
        holes.append(Hole(tuple(verts), centre, radius2, diagram, hole_volume(verts, centre, radius2, diagram, N)))
    return holes


def enumerate_holes(N: int, window: Tuple[int, int] = DEFAULT_WINDOW, jobs: int = 1,
                    use_cache: bool = True, strict: bool = True) -> List[Hole]:
    """Every generalized hole whose centre lies in the half-open unit cell of the basis.

    Args:
        N: Order of the automorphism.
        window: Coefficient box [lo, hi) that must hold every vertex.
        jobs: Worker threads for the float filter.
        use_cache: Reuse (and store) the enumeration in the cache directory.
        strict: Raise on structural anomalies instead of logging them.

    Raises:
        WindowTooSmallError: if a hole can reach outside the window.
        VerificationError: on a structural anomaly when ``strict`` is set.
    """
    lattice = fixed_lattice(N)
    _check_reach(lattice, window)
    cache_name = f"holes-N{N}"
    if use_cache:
        cached = load_cached(cache_name)
        if cached and cached.get("N") == N:
            holes = _holes_from_cache(N, cached)
            logger.info(f"Loaded {len(holes)} holes for N={N} from cache")
            return holes

    start = time.time()
    M = m_for(N)
    ctx = _context(N, lattice)
    graph = _neighbour_graph(ctx)
    size = 2 * M
    cliques = []
    for clique in nx.enumerate_all_cliques(graph):
        if len(clique) > size:
            break
        if len(clique) == size:
            cliques.append(sorted(clique))
    anchor = next(i for i, p in enumerate(ctx.points) if p.kind == FIX and p.norm == 0)
    logger.info(f"Searching holes for N={N}",
                extra={"points": len(ctx.points), "neighbours": graph.number_of_nodes(), "cliques": len(cliques)})

    arrays = [np.array([[anchor] + q for q in cliques[i:i + BATCH_SIZE]], dtype=np.int64)
              for i in range(0, len(cliques), BATCH_SIZE)]
    survivors: List[Tuple[Tuple[int, ...], np.ndarray]] = []
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        futures = [executor.submit(_float_survivors, ctx, arr) for arr in arrays]
        for future in tqdm(as_completed(futures), total=len(futures), desc=f"holes N={N}",
                           disable=not progress_enabled()):
            survivors.extend(future.result())
    survivors.sort(key=lambda item: item[0])

    found: Dict[Coeffs, Hole] = {}
    seen = set()
    for clique, centre in survivors:
        key = tuple(np.round(centre, 6))
        if key in seen:
            continue
        seen.add(key)
        hole = _exact_hole(ctx, clique, centre)
        if hole is not None and hole.centre not in found:
            found[hole.centre] = hole
    holes = [found[k] for k in sorted(found)]

    anomalies = _validate(holes, N, window)
    if anomalies:
        if strict:
            raise VerificationError(f"hole enumeration for N={N} has anomalies", anomalies)
        logger.warning(f"Hole anomalies for N={N}", extra={"count": len(anomalies)})
    logger.info(f"Found {len(holes)} holes for N={N}",
                extra={"survivors": len(survivors), "seconds": round(time.time() - start, 2)})
    if use_cache:
        save_cached(cache_name, {"N": N, "holes": [h.to_json() for h in holes]})
    return holes


def circumcentre(vertices: Sequence[RPoint], N: int) -> Optional[Tuple[Coeffs, Fraction]]:
    """Exact generalized circumcentre and squared radius of affinely independent points.

    With more points than dimensions plus one, the first independent subset
    is solved and the rest must be equidistant. Returns None when there is no
    common centre.

    Raises:
        DegenerateCentreError: if the points do not pin down a unique centre.
    """
    lattice = fixed_lattice(N)
    n = lattice.rank
    base = vertices[0]
    rows, rhs = [], []
    for v in vertices[1:]:
        rows.append([2 * sum(lattice.gram[i][j] * (v.coeffs[j] - base.coeffs[j]) for j in range(n))
                     for i in range(n)])
        rhs.append(v.norm - base.norm + v.offset - base.offset)
    if len(rows) < n:
        raise DegenerateCentreError(f"{len(vertices)} points cannot fix a centre in rank {n}")
    centre = next((c for c in (exact_solve([rows[i] for i in pick], [rhs[i] for i in pick])
                               for pick in combinations(range(len(rows)), n)) if c is not None), None)
    if centre is None:
        raise DegenerateCentreError("points are affinely dependent")
    radius2 = generalized_distance2(lattice, base, centre)
    if any(generalized_distance2(lattice, v, centre) != radius2 for v in vertices):
        return None
    return tuple(centre), radius2


# -- audits -----------------------------------------------------------------------------


def type_table(holes: Sequence[Hole], N: int) -> List[Dict[str, object]]:
    """One row per hole type: label, squared radius, unit volume, count and total."""
    M = m_for(N)
    rows: Dict[Tuple[str, Fraction], Dict[str, object]] = {}
    for h in holes:
        key = (h.label, h.volume.unit)
        row = rows.setdefault(key, {"label": h.label, "radius2": h.radius2, "unit": h.volume.unit, "count": 0})
        row["count"] += 1
    table = sorted(rows.values(), key=lambda r: (-r["radius2"], r["label"]))
    for row in table:
        row["total"] = row["unit"] * row["count"] / math.factorial(2 * M)
    return table


def volume_audit(N: int, holes: Optional[Sequence[Hole]] = None, strict: bool = False) -> Dict[str, object]:
    """Check that the hole volumes of one cell add up to sqrt(N)^M.

    Totals are in units of sqrt(N)^(-M), so the expected sum is N^M.
    """
    holes = enumerate_holes(N) if holes is None else holes
    M = m_for(N)
    table = type_table(holes, N)
    total = sum((row["total"] for row in table), Fraction(0))
    expected = Fraction(N) ** M
    mismatches = []
    if total != expected:
        mismatches.append({"item": "total", "found": str(total), "expected": str(expected)})
    for h in holes:
        if h.volume.formula_agrees is False:
            mismatches.append({"item": h.label, "found": str(h.volume.unit), "expected": str(h.volume.formula_unit2)})
    report = {"N": N, "types": len(table), "holes": len(holes), "total": total, "expected": expected,
              "rows": table, "mismatches": mismatches, "ok": not mismatches}
    logger.info(f"Volume audit for N={N}: {'ok' if report['ok'] else 'MISMATCH'}",
                extra={"total": str(total), "expected": str(expected)})
    if strict and mismatches:
        raise VerificationError(f"volume audit fails for N={N}", mismatches)
    return report


def appendix_a_report(N: int, holes: Optional[Sequence[Hole]] = None) -> Dict[str, object]:
    """Compare the per-type table with the shipped hole catalogue for N = 23, 11, 7."""
    if N not in APPENDIX_A:
        raise InvalidParameterError(f"no shipped hole catalogue for N={N}")
    holes = enumerate_holes(N) if holes is None else holes
    golden = APPENDIX_A[N]
    table = type_table(holes, N)
    rows = []
    seen = set()
    for row in table:
        expected = golden.get(row["label"])
        seen.add(row["label"])
        rows.append({
            "label": row["label"],
            "radius2": row["radius2"],
            "unit": row["unit"],
            "count": row["count"],
            "total": row["total"],
            "expected_unit": expected[0] if expected else "",
            "expected_count": expected[1] if expected else "",
            "match": bool(expected) and expected == (row["unit"], row["count"]),
        })
    for label, (unit, count) in golden.items():
        if label not in seen:
            rows.append({"label": label, "radius2": "", "unit": "", "count": 0, "total": "",
                         "expected_unit": unit, "expected_count": count, "match": False})
    ok = all(r["match"] for r in rows)
    logger.info(f"Hole catalogue for N={N}: {'ok' if ok else 'MISMATCH'}", extra={"types": len(rows)})
    return {"N": N, "rows": rows, "ok": ok}


def covering_radius_check(N: int, holes: Optional[Sequence[Hole]] = None) -> Dict[str, object]:
    """Largest squared distance from a hole centre or dual point to the fix lattice.

    The expected value is 2 + 2/N, reached exactly at the dual points.
    """
    holes = enumerate_holes(N) if holes is None else holes
    lattice = fixed_lattice(N)
    expected = 2 + Fraction(2, N)
    candidates = [("centre", h.centre) for h in holes] + [("dual", rep) for rep in dual_class_reps(N)]
    best = Fraction(0)
    maximizers = []
    overflow = []
    for kind, x in candidates:
        near = short_vectors(lattice, expected, offset=[-c for c in x])
        if not near:
            overflow.append({"kind": kind, "point": [str(c) for c in x]})
            continue
        d2 = near[0].norm
        if d2 > best:
            best, maximizers = d2, [kind]
        elif d2 == best:
            maximizers.append(kind)
    dual_exact = all(short_vectors(lattice, expected, offset=[-c for c in rep])[0].norm == expected
                     for rep in dual_class_reps(N))
    ok = not overflow and best == expected and set(maximizers) == {"dual"} and dual_exact
    report = {"N": N, "max_distance2": best, "expected": expected, "maximizers": len(maximizers),
              "maximizers_dual": set(maximizers) == {"dual"}, "overflow": overflow, "ok": ok}
    logger.info(f"Covering radius for N={N}: {format_rational(best)}", extra={"ok": ok})
    return report


def _membership_tests(hole: Hole) -> List[Tuple[Coeffs, Matrix, np.ndarray]]:
    """(base point, exact inverse, float inverse) of every simplex of a hole."""
    positions = [v.coeffs for v in hole.vertices]
    if hole.is_affine:
        simplices = [[hole.centre] + [positions[j] for j in face] for face in faces(hole)]
    else:
        simplices = [positions]
    tests = []
    for simplex in simplices:
        base = simplex[0]
        cols = Matrix([[Rational(p[i] - base[i]) for p in simplex[1:]] for i in range(len(base))])
        inv = cols.inv()
        tests.append((base, inv, np.array(inv.tolist(), dtype=float)))
    return tests


def _contains(tests, x: Coeffs, xf: np.ndarray) -> Tuple[bool, bool]:
    """(inside the closed hull, on its boundary) for a translated sample point."""
    inside = boundary = False
    for base, inv, inv_f in tests:
        lam_f = inv_f @ (xf - np.array([float(b) for b in base]))
        if lam_f.min() < -1e-9 or lam_f.sum() > 1 + 1e-9:
            continue
        diff = Matrix([Rational(a - b) for a, b in zip(x, base)])
        lam = list(inv * diff)
        lam0 = 1 - sum(lam)
        coords = lam + [lam0]
        if all(c >= 0 for c in coords):
            inside = True
            if any(c == 0 for c in coords):
                boundary = True
    return inside, boundary


def partition_check(N: int, samples: int = 1000, seed: int = 0,
                    holes: Optional[Sequence[Hole]] = None) -> Dict[str, object]:
    """Sample rational points and count the holes containing each one.

    Interior points must lie in exactly one hole; points on a shared face in
    at least one.
    """
    holes = enumerate_holes(N) if holes is None else holes
    lattice = fixed_lattice(N)
    n = lattice.rank
    rng = random.Random(seed)
    denom = 1_000_003
    G = np.array([[float(x) for x in row] for row in lattice.gram])
    centres = np.array([[float(c) for c in h.centre] for h in holes])
    reach = max(math.sqrt(2 * float(lattice.dual_gram[i][i])) for i in range(n))
    k = math.ceil(reach + 0.5)
    offsets = np.array(list(product(range(-k, k + 1), repeat=n)), dtype=float)
    tests = [_membership_tests(h) for h in holes]
    failures = []
    boundary_hits = 0
    for _ in tqdm(range(samples), desc=f"partition N={N}", disable=not progress_enabled()):
        p = tuple(Fraction(rng.randrange(denom), denom) for _ in range(n))
        pf = np.array([float(c) for c in p])
        count = 0
        on_face = False
        for h_idx, hole in enumerate(holes):
            base = np.round(pf - centres[h_idx])
            shifts = base + offsets
            diff = centres[h_idx] + shifts - pf
            d2 = np.einsum("ki,ij,kj->k", diff, G, diff)
            for t in shifts[d2 <= 2 + 1e-9]:
                t_exact = [Fraction(int(round(x))) for x in t]
                x = tuple(a - b for a, b in zip(p, t_exact))
                inside, boundary = _contains(tests[h_idx], x, pf - t)
                if inside:
                    count += 1
                    on_face = on_face or boundary
        if on_face:
            boundary_hits += 1
        if count == 0 or (count > 1 and not on_face):
            failures.append({"point": [str(c) for c in p], "holes": count})
    report = {"N": N, "samples": samples, "seed": seed, "boundary_hits": boundary_hits,
              "failures": failures, "ok": not failures}
    logger.info(f"Partition check for N={N}: {'ok' if report['ok'] else 'FAIL'}",
                extra={"samples": samples, "failures": len(failures)})
    return report


# -- point group ------------------------------------------------------------------------


def _n11_maps() -> Dict[str, List[List[Fraction]]]:
    """Ambient maps on (a1, a2; c1, c2): three involutions and the order-3 map."""
    q = Fraction(1, 4)
    h = Fraction(1, 2)
    return {
        "minus_id": [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
        "flip": [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
        "swap": [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        "rotate": [[h, q, 0, -11 * q], [-q, h, 11 * q, 0], [0, -q, h, -q], [q, 0, q, h]],
    }


def _coefficient_map(lattice: GramLattice, ambient: Sequence[Sequence[Fraction]]) -> Matrix:
    B = Matrix([[Rational(x) for x in row] for row in lattice.basis])
    Phi = Matrix([[Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in ambient])
    return B * Phi.T * B.inv()


def point_group_check(N: int = 11, holes: Optional[Sequence[Hole]] = None, limit: int = 10_000) -> Dict[str, object]:
    """Check the explicit N=11 symmetries: isometries of the lattice that permute the holes.

    Coefficient vectors transform as row vectors, x -> x B Phi^T B^(-1).
    """
    if N != 11:
        raise InvalidParameterError("explicit point-group maps are only shipped for N=11")
    lattice = fixed_lattice(N)
    holes = enumerate_holes(N) if holes is None else holes
    metric = Matrix.diag(*lattice.metric)
    maps = {}
    problems = []
    for name, ambient in _n11_maps().items():
        Phi = Matrix([[Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in ambient])
        if Phi.T * metric * Phi != metric:
            problems.append({"map": name, "error": "not an isometry"})
        K = _coefficient_map(lattice, ambient)
        if any(x.q != 1 for x in K):
            problems.append({"map": name, "error": "does not preserve the lattice"})
        maps[name] = K

    # closure of the generated group
    identity = Matrix.eye(lattice.rank)
    key = lambda m: tuple(int(x) for x in m)
    group = {key(identity): identity}
    frontier = [identity]
    while frontier and len(group) <= limit:
        nxt = []
        for g in frontier:
            for K in maps.values():
                prod_ = g * K
                k = key(prod_)
                if k not in group:
                    group[k] = prod_
                    nxt.append(prod_)
        frontier = nxt
    order = len(group)
    expected = POINT_GROUP_ORDER[N]
    if order > limit or expected % order:
        problems.append({"error": "group order", "order": order, "expected_divisor_of": expected})

    centres = {h.centre: h.label for h in holes}
    for name, K in maps.items():
        for h in holes:
            image = Matrix([[Rational(c) for c in h.centre]]) * K
            moved = tuple(Fraction(int(x.p), int(x.q)) for x in image)
            moved = tuple(c - math.floor(c) for c in moved)
            if centres.get(moved) != h.label:
                problems.append({"map": name, "hole": h.label, "error": "image is not a hole of the same type"})
                break
    report = {"N": N, "maps": list(maps), "group_order": order, "problems": problems, "ok": not problems}
    logger.info(f"Point-group check for N={N}: order {order}", extra={"ok": report["ok"]})
    return report

