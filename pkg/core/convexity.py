"""Convexity points: z is one when (K - z) U (z - K) is convex."""
import logging
import math
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .body import boundary_points, is_centrally_symmetric, support_values
from .config_manager import SamplingSettings, load_settings
from .errors import HullInvariantViolation, ParallelEdges, PreconditionError
from .hedgehog import hedgehog_hull, polygon_hedgehog, smooth_hedgehog, smooth_hull_summary
from .kernel import (
    Rat2,
    area,
    clip_convex,
    convex_hull,
    float_area,
    float_hull_indices,
    orient,
    point_in_convex,
    rat2,
    scale,
    sub,
)
from .models import (
    ArcPiece,
    Body,
    Candidate,
    ConvexityReport,
    ConvexPolygon,
    FourierTerm,
    OracleComparison,
    SmoothBody,
)

logger = logging.getLogger(__name__)


def _point(z) -> Rat2:
    return z if isinstance(z, Rat2) else rat2(z[0], z[1])


def reflect(body: Body, z) -> Body:
    """2z - K, in the representation of K."""
    if isinstance(body, ConvexPolygon):
        twice = scale(_point(z), 2)
        # a point reflection is a half turn, so the ccw order is kept
        return ConvexPolygon(vertices=tuple(sub(twice, v) for v in body.vertices))
    zx, zy = float(z[0]), float(z[1])
    if body.kind == "fourier":
        terms = {t.j: FourierTerm(j=t.j, a=(-1) ** t.j * t.a, b=(-1) ** t.j * t.b) for t in body.terms}
        first = terms.get(1, FourierTerm(j=1))
        terms[1] = FourierTerm(j=1, a=first.a + 2 * zx, b=first.b + 2 * zy)
        return SmoothBody(kind="fourier", a0=body.a0, terms=[terms[j] for j in sorted(terms)])
    arcs = [
        ArcPiece(
            center=(2 * zx - a.center[0], 2 * zy - a.center[1]),
            radius=a.radius,
            start=a.start + math.pi,
            end=a.end + math.pi,
        )
        for a in body.arcs
    ]
    return SmoothBody(kind="arcgon", arcs=arcs)


def is_convexity_point(body: Body, z) -> bool:
    """Exact for polygons via area(conv(A U B)) = area(A) + area(B) - area(A n B)."""
    if isinstance(body, SmoothBody):
        return is_convexity_point_smooth(body, z)
    z = _point(z)
    a = convex_hull(sub(v, z) for v in body.vertices)
    b = convex_hull(sub(z, v) for v in body.vertices)
    hull = convex_hull(a.vertices + b.vertices)
    overlap = clip_convex(a, b)
    union_area = area(a) + area(b) - (area(overlap) if overlap is not None else 0)
    return area(hull) == union_area


def is_convexity_point_smooth(
    body: SmoothBody,
    z,
    samples: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> bool:
    """Tolerance-mode convexity test for smooth bodies (not exact).

    The boundary of A U B with A = K - z, B = z - K is sampled from the
    boundary samples of A outside B and of B outside A; the union is called
    convex when its hull area exceeds the sampled area by at most
    ``tolerance`` relatively.
    """
    settings = load_settings(SamplingSettings, "sampling")
    n = samples or settings.convexity_samples
    tol = settings.convexity_tolerance if tolerance is None else tolerance
    zx, zy = float(z[0]), float(z[1])
    phi = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    u = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    if (support_values(body, phi) - u @ np.array([zx, zy])).min() <= 0:
        return False  # z is not an interior point of K
    a_pts = boundary_points(body, phi) - np.array([zx, zy])

    polar = np.arctan2(a_pts[:, 1], a_pts[:, 0])
    radius = np.hypot(a_pts[:, 0], a_pts[:, 1])
    order = np.argsort(polar)
    polar_sorted, radius_sorted = polar[order], radius[order]

    def radial(theta: np.ndarray) -> np.ndarray:
        return np.interp(np.mod(theta + math.pi, 2 * math.pi) - math.pi, polar_sorted, radius_sorted, period=2 * math.pi)

    # B = -A, so a point x lies inside B iff -x lies inside A
    keep = radius >= radial(polar + math.pi)
    union = np.concatenate([a_pts[keep], -a_pts[keep]])
    union = union[np.argsort(np.arctan2(union[:, 1], union[:, 0]))]
    sampled = float_area(union)
    hull = float_area(union[float_hull_indices(union)])
    return (hull - sampled) <= tol * hull


def candidate_convexity_points(polygon: ConvexPolygon) -> List[Candidate]:
    """Hull vertices of the middle hedgehog, each checked exactly.

    Every one of them is a convexity point; a failed check raises
    HullInvariantViolation since it can only come from a defect here.
    """
    hull = hedgehog_hull(polygon_hedgehog(polygon))
    candidates = []
    for vertex, corner in zip(hull.hull.vertices, hull.hull_corners):
        if not is_convexity_point(polygon, vertex):
            raise HullInvariantViolation(f"Hull vertex {vertex} of the hedgehog is not a convexity point")
        candidates.append(Candidate(point=vertex, corner=corner, verified=True))
    return candidates


def _oracle_lattice(polygon: ConvexPolygon, grid: int) -> Tuple[Rat2, Fraction, Fraction]:
    """Lower-left corner and cell size of the grid over the bounding box."""
    if grid < 16:
        raise PreconditionError(f"Oracle grid must be at least 16, got {grid}")
    xs = [v.x for v in polygon.vertices]
    ys = [v.y for v in polygon.vertices]
    x0, y0 = min(xs), min(ys)
    return Rat2(x0, y0), (max(xs) - x0) / grid, (max(ys) - y0) / grid


def brute_force_convexity_points(polygon: ConvexPolygon, grid: int) -> List[Rat2]:
    """Grid points of the bounding box, inside K, passing the exact test."""
    origin, dx, dy = _oracle_lattice(polygon, grid)
    hits: List[Rat2] = []
    for i in range(grid + 1):
        for j in range(grid + 1):
            z = Rat2(origin.x + i * dx, origin.y + j * dy)
            if not point_in_convex(polygon.vertices, z):
                continue
            if is_convexity_point(polygon, z):
                hits.append(z)
    logger.debug("Oracle grid %d: %d hits", grid, len(hits))
    return hits


def _within_cell(a: Rat2, b: Rat2, dx: Fraction, dy: Fraction) -> bool:
    return abs(a.x - b.x) <= dx and abs(a.y - b.y) <= dy


def compare_with_oracle(
    polygon: ConvexPolygon,
    candidates: Sequence[Rat2],
    grid: int,
    hits: Optional[Sequence[Rat2]] = None,
) -> OracleComparison:
    """Matches grid hits and candidates within one grid cell in both directions.

    Convexity points off the grid nodes are invisible to the grid, so a
    candidate without a nearby hit only counts against consistency when it
    lies on a node itself. A hit far from every candidate always does.
    """
    origin, dx, dy = _oracle_lattice(polygon, grid)
    if hits is None:
        hits = brute_force_convexity_points(polygon, grid)
    matched = [z for z in candidates if any(_within_cell(z, h, dx, dy) for h in hits)]
    on_grid = [
        z for z in candidates
        if ((z.x - origin.x) / dx).denominator == 1 and ((z.y - origin.y) / dy).denominator == 1
    ]
    comparison = OracleComparison(
        grid=grid,
        cell=(dx, dy),
        hits=list(hits),
        matched=matched,
        unmatched=[z for z in candidates if z not in matched],
        on_grid=on_grid,
        extra=[h for h in hits if not any(_within_cell(z, h, dx, dy) for z in candidates)],
    )
    if not comparison.consistent:
        logger.warning(
            "Oracle grid %d disagrees: %d extra hits, %d grid-node candidates missed",
            grid, len(comparison.extra), len([z for z in on_grid if z not in matched]),
        )
    return comparison


def first_independent_triple(points: Sequence[Rat2]) -> Optional[Tuple[Rat2, Rat2, Rat2]]:
    for a, b, c in combinations(points, 3):
        if orient(a, b, c) != 0:
            return a, b, c
    return None


def _smooth_candidates(body: SmoothBody) -> List[Candidate]:
    summary = smooth_hull_summary(smooth_hedgehog(body, refine=3))
    candidates = []
    for x, y in summary.cluster_points:
        point = Rat2(Fraction(x), Fraction(y))
        candidates.append(Candidate(point=point, verified=is_convexity_point_smooth(body, (x, y))))
    return candidates


def find_convexity_triple(body: Body, body_id: str = "body", fallback_grid: Optional[int] = None) -> ConvexityReport:
    """Three affinely independent convexity points, or the center of a symmetric body.

    Polygons with parallel edges raise ParallelEdges unless ``fallback_grid``
    is given, in which case the oracle grid supplies the candidates.
    """
    symmetric, center = is_centrally_symmetric(body)
    if symmetric:
        point = center if isinstance(center, Rat2) else Rat2(Fraction(center[0]), Fraction(center[1]))
        verified = is_convexity_point(body, point if isinstance(body, ConvexPolygon) else center)
        return ConvexityReport(
            body_id=body_id,
            candidates=[Candidate(point=point, verified=verified)],
            symmetric=True,
            center=point,
        )
    if isinstance(body, SmoothBody):
        candidates = _smooth_candidates(body)
    else:
        try:
            candidates = candidate_convexity_points(body)
        except ParallelEdges:
            if fallback_grid is None:
                raise
            logger.info("Parallel edges: falling back to the oracle grid %d", fallback_grid)
            candidates = [Candidate(point=z, verified=True) for z in brute_force_convexity_points(body, fallback_grid)]
    triple = first_independent_triple([c.point for c in candidates if c.verified])
    if triple is None:
        logger.warning("No affinely independent triple among %d verified candidates", len(candidates))
    return ConvexityReport(body_id=body_id, candidates=candidates, affine_independent_triple=triple)
