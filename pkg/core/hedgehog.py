"""Middle lines, middle sets and the middle hedgehog of a convex body.

Polygon hedgehogs are exact: a closed polygonal curve of middle sets joined
at corners, each corner classified weak or strong. Smooth hedgehogs are the
sampled curve x(phi) = p(phi) u(phi) + p'(phi) u'(phi) with p the odd part of
the support function.
"""
import logging
import math
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .body import (
    boundary_points,
    breakpoints,
    edge_normal_fan,
    extreme_vertex,
    make_polygon,
    support,
    support_derivative,
    support_values,
)
from .config_manager import SamplingSettings, load_settings
from .errors import InternalInvariantError, HullInvariantViolation, PreconditionError
from .kernel import (
    HullPolygon,
    Rat2,
    Segment,
    add,
    convex_hull,
    dot,
    float_hull_indices,
    hausdorff_distance,
    midpoint,
    neg,
    orient,
    rat2,
    sub,
    to_float_array,
)
from .models import (
    Body,
    ConvexPolygon,
    Corner,
    HedgehogHull,
    Line,
    MiddleHedgehog,
    MiddleSet,
    SmoothBody,
    SmoothHullSummary,
)

logger = logging.getLogger(__name__)


def _direction(u) -> Rat2:
    return u if isinstance(u, Rat2) else rat2(u[0], u[1])


def _reduced_angle(x: float, y: float) -> float:
    """Angle of the unoriented direction (x, y), in (-pi/2, pi/2]."""
    phi = math.atan2(y, x)
    if phi > math.pi / 2:
        phi -= math.pi
    elif phi <= -math.pi / 2:
        phi += math.pi
    return phi


def middle_line(body: Body, u) -> Line:
    """The line (H(K, u) + H(K, -u)) / 2, written as <x, u> = p(u)."""
    if isinstance(body, ConvexPolygon):
        d = _direction(u)
        offset = (support(body, d).value - support(body, neg(d)).value) / 2
        return Line(normal=d, offset=offset)
    ux, uy = float(u[0]), float(u[1])
    norm = math.hypot(ux, uy)
    if norm == 0:
        raise PreconditionError("Direction must be nonzero")
    phi = math.atan2(uy, ux)
    return Line(normal=(ux / norm, uy / norm), offset=float(odd_support(body, phi)))


def _face_points(face: Segment) -> Tuple[Rat2, ...]:
    return face.endpoints


def middle_set(body: Body, u, index: int = -1) -> MiddleSet:
    """Z_K(u) = (F(K, u) + F(K, -u)) / 2."""
    if isinstance(body, ConvexPolygon):
        d = _direction(u)
        face_u = support(body, d).face
        face_v = support(body, neg(d)).face
        sums = convex_hull(midpoint(a, b) for a in _face_points(face_u) for b in _face_points(face_v))
        verts = sums.vertices
        geometry = Segment.between(verts[0], verts[-1])
        return MiddleSet(
            index=index,
            normal_angle=_reduced_angle(float(d.x), float(d.y)),
            geometry=geometry,
            source=(face_u, face_v),
        )
    phi = math.atan2(float(u[1]), float(u[0]))
    angles = np.array([phi, phi + math.pi])
    x_u, x_v = boundary_points(body, angles)
    m = (x_u + x_v) / 2.0
    point = Rat2(Fraction(float(m[0])), Fraction(float(m[1])))
    face_u = Rat2(Fraction(float(x_u[0])), Fraction(float(x_u[1])))
    face_v = Rat2(Fraction(float(x_v[0])), Fraction(float(x_v[1])))
    return MiddleSet(
        index=index,
        normal_angle=_reduced_angle(math.cos(phi), math.sin(phi)),
        geometry=Segment.between(point, point),
        source=(Segment.between(face_u, face_u), Segment.between(face_v, face_v)),
    )


def polygon_hedgehog(polygon: ConvexPolygon) -> MiddleHedgehog:
    """Exact middle hedgehog: k middle sets and k classified corners.

    Middle set i is returned with endpoints (corner i-1, corner i), so walking
    the middle sets in order traces the closed curve.
    """
    fan = edge_normal_fan(polygon)
    k = fan.k
    normals = fan.normals
    sets = [middle_set(polygon, normals[i], index=i) for i in range(k)]
    edges = [polygon.edge(e) for e in fan.edge_of]

    corners: List[Corner] = []
    for i in range(k):
        j = (i + 1) % k
        # u(phi_k) and u(phi_1 + pi) bound the wrap-around arc
        d = add(normals[i], normals[j]) if j else sub(normals[i], normals[0])
        p = polygon.vertices[extreme_vertex(polygon, d)]
        q = polygon.vertices[extreme_vertex(polygon, neg(d))]
        location = midpoint(p, q)
        shared = set(edges[i]) & set(edges[j])
        weak = bool(shared & {p, q})

        ends_i = sets[i].geometry.endpoints
        ends_j = sets[j].geometry.endpoints
        if location not in ends_i or location not in ends_j:
            raise InternalInvariantError(f"Corner {i} is not a common endpoint of its middle sets")
        other_i = ends_i[1] if ends_i[0] == location else ends_i[0]
        other_j = ends_j[1] if ends_j[0] == location else ends_j[0]
        side_i, side_j = orient(p, q, other_i), orient(p, q, other_j)
        if side_i and side_j and (side_i == side_j) == weak:
            raise InternalInvariantError(f"Corner {i}: side-of-line test disagrees with adjacency")
        corners.append(Corner(location=location, kind="weak" if weak else "strong", opposite_pair=(p, q), between=(i, j)))

    ordered_sets = []
    for i, ms in enumerate(sets):
        start, end = corners[i - 1].location, corners[i].location
        ordered_sets.append(ms.model_copy(update={"geometry": Segment.between(start, end)}))
    return MiddleHedgehog(kind="polygon", middle_sets=ordered_sets, corners=corners, fan=fan)


def hedgehog_hull(hedgehog: MiddleHedgehog) -> HedgehogHull:
    """Hull of the hedgehog with each vertex tagged by its corner.

    A weak corner at a hull vertex raises HullInvariantViolation.
    """
    if hedgehog.kind == "smooth":
        summary = smooth_hull_summary(hedgehog)
        points = [Rat2(Fraction(x), Fraction(y)) for x, y in summary.cluster_points]
        return HedgehogHull(hull=convex_hull(points), hull_corners=[])
    endpoints = [p for ms in hedgehog.middle_sets for p in ms.geometry.endpoints]
    hull = convex_hull(endpoints)
    by_location = {}
    for corner in hedgehog.corners:
        by_location.setdefault(corner.location, []).append(corner)
    tagged: List[Corner] = []
    for vertex in hull.vertices:
        at_vertex = by_location.get(vertex)
        if not at_vertex:
            raise InternalInvariantError(f"Hull vertex {vertex} is not a corner")
        if any(c.kind == "weak" for c in at_vertex):
            raise HullInvariantViolation(f"Weak corner {vertex} is a vertex of the hedgehog hull")
        tagged.append(at_vertex[0])
    return HedgehogHull(hull=hull, hull_corners=tagged)


def hull_vertex_count(polygon: ConvexPolygon) -> int:
    return hedgehog_hull(polygon_hedgehog(polygon)).vertex_count


# --- smooth case --------------------------------------------------------------

def odd_support(body: Body, phi):
    """p(phi) = (h(u(phi)) - h(-u(phi))) / 2."""
    angles = np.asarray(phi, dtype=float)
    values = 0.5 * (support_values(body, angles) - support_values(body, angles + math.pi))
    return float(values) if values.ndim == 0 else values


def _support_derivative_any(body: Body, phi: np.ndarray) -> np.ndarray:
    if isinstance(body, ConvexPolygon):
        # derivative of <v_max, u> away from edge normals
        verts = to_float_array(body.vertices)
        u = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        du = np.stack([-np.sin(phi), np.cos(phi)], axis=-1)
        best = (u @ verts.T).argmax(axis=-1)
        return (verts[best] * du).sum(axis=-1)
    return support_derivative(body, phi)


def odd_support_derivative(body: Body, phi):
    angles = np.asarray(phi, dtype=float)
    values = 0.5 * (_support_derivative_any(body, np.atleast_1d(angles)) - _support_derivative_any(body, np.atleast_1d(angles) + math.pi))
    return float(values[0]) if angles.ndim == 0 else values


def middle_curve(body: Body, phi: np.ndarray) -> np.ndarray:
    """x(phi) = p u + p' u' on an array of angles, shape (n, 2)."""
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    u = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    du = np.stack([-np.sin(phi), np.cos(phi)], axis=-1)
    p = np.atleast_1d(odd_support(body, phi))
    dp = np.atleast_1d(odd_support_derivative(body, phi))
    return p[:, None] * u + dp[:, None] * du


def middle_point(body: Body, phi: float) -> Tuple[float, float]:
    x = middle_curve(body, np.array([phi]))[0]
    return float(x[0]), float(x[1])


def middle_line_intersection(body: Body, phi: float, delta: float) -> Tuple[float, float]:
    """Intersection of the middle lines at phi and phi + delta."""
    a = np.array([[math.cos(phi), math.sin(phi)], [math.cos(phi + delta), math.sin(phi + delta)]])
    b = np.array([odd_support(body, phi), odd_support(body, phi + delta)])
    x = np.linalg.solve(a, b)
    return float(x[0]), float(x[1])


def sample_angles(body: SmoothBody, n: int, refine: int = 0) -> np.ndarray:
    """n uniform angles on [0, pi) plus ``refine`` interior samples per elementary interval."""
    angles = np.linspace(0.0, math.pi, n, endpoint=False)
    cuts = sorted({float(np.mod(b, math.pi)) for b in breakpoints(body)})
    if refine and cuts:
        extra = []
        bounds = cuts + [cuts[0] + math.pi]
        for lo, hi in zip(bounds, bounds[1:]):
            for r in range(1, refine + 1):
                extra.append(np.mod(lo + (hi - lo) * r / (refine + 1), math.pi))
        angles = np.unique(np.concatenate([angles, np.array(extra)]))
    return angles


def smooth_hedgehog(body: SmoothBody, n: Optional[int] = None, refine: int = 0) -> MiddleHedgehog:
    """Samples x(phi) for phi in [0, pi); x(pi) = x(0) closes the curve."""
    if n is None:
        n = load_settings(SamplingSettings, "sampling").hedgehog_samples
    if n < 8:
        raise PreconditionError(f"smooth_hedgehog needs at least 8 samples, got {n}")
    angles = sample_angles(body, n, refine)
    return MiddleHedgehog(kind="smooth", angles=angles, points=middle_curve(body, angles), body=body)


def smooth_hull_summary(hedgehog: MiddleHedgehog, cluster_gap: int = 3) -> SmoothHullSummary:
    """Counts hull vertices of a sampled hedgehog by clustering hull samples.

    Consecutive near-equal samples are merged first; hull samples whose
    indices differ by at most ``cluster_gap`` (cyclically) form one vertex.
    """
    pts = np.asarray(hedgehog.points, dtype=float)
    extent = float(np.ptp(pts, axis=0).max()) if len(pts) else 0.0
    scale = max(extent, 1e-300)
    if extent <= 1e-9 * max(1.0, float(np.abs(pts).max())):
        center = pts.mean(axis=0)
        return SmoothHullSummary(vertex_count=1, cluster_points=[(float(center[0]), float(center[1]))], degenerate=True)

    dup_tol = 1e-9 * scale
    kept = [0]
    for i in range(1, len(pts)):
        if np.hypot(*(pts[i] - pts[kept[-1]])) > dup_tol:
            kept.append(i)
    if len(kept) > 1 and np.hypot(*(pts[kept[-1]] - pts[kept[0]])) <= dup_tol:
        kept.pop()
    compressed = pts[kept]
    m = len(compressed)
    if m < 3:
        return SmoothHullSummary(
            vertex_count=m,
            cluster_points=[(float(x), float(y)) for x, y in compressed],
            degenerate=True,
        )

    nodes = sorted(set(float_hull_indices(compressed, 1e-12 * scale * scale)))
    clusters: List[List[int]] = [[nodes[0]]]
    for idx in nodes[1:]:
        if idx - clusters[-1][-1] <= cluster_gap:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    if len(clusters) > 1 and nodes[0] + m - clusters[-1][-1] <= cluster_gap:
        clusters[0] = clusters.pop() + clusters[0]
    centers = [compressed[c].mean(axis=0) for c in clusters]
    logger.debug("Smooth hull: %d samples, %d hull nodes, %d clusters", m, len(nodes), len(clusters))
    return SmoothHullSummary(
        vertex_count=len(clusters),
        cluster_points=[(float(c[0]), float(c[1])) for c in centers],
        degenerate=len(clusters) < 3,
    )


def sample_polygon_hedgehog(hedgehog: MiddleHedgehog, per_segment: int = 2048) -> np.ndarray:
    """Dense float samples of a polygonal hedgehog, ``per_segment`` per middle set."""
    t = np.linspace(0.0, 1.0, per_segment, endpoint=False)[:, None]
    chunks = []
    for ms in hedgehog.middle_sets:
        a = np.array([float(ms.geometry.a.x), float(ms.geometry.a.y)])
        b = np.array([float(ms.geometry.b.x), float(ms.geometry.b.y)])
        chunks.append(a + t * (b - a))
    return np.concatenate(chunks)


def hedgehog_distance(polygon: ConvexPolygon, body: SmoothBody, samples: int = 8192, per_segment: int = 2048) -> float:
    """Sampled Hausdorff distance between the hedgehogs of P and of a smooth body."""
    chunk = load_settings(SamplingSettings, "sampling").hausdorff_chunk
    smooth = smooth_hedgehog(body, samples, refine=per_segment)
    return hausdorff_distance(
        sample_polygon_hedgehog(polygon_hedgehog(polygon), per_segment), smooth.points, chunk_rows=chunk
    )


# --- diagnostics ----------------------------------------------------------------

class InterceptDiagnostic(NamedTuple):
    f: float
    derivative_fd: float
    derivative_formula: float


def midline_intercept(body: Body, phi: float, step: float = 1e-4) -> InterceptDiagnostic:
    """f(phi) = p(phi) / cos(phi) where the middle line meets the e_1 axis.

    Returns f, its central difference at ``step`` and <m(u(phi)), e_2> / cos^2 phi.
    """
    cos_phi = math.cos(phi)
    if abs(phi) >= math.pi / 2 or abs(cos_phi) < 1e-12:
        raise PreconditionError("midline_intercept needs phi strictly inside (-pi/2, pi/2)")

    def f(angle: float) -> float:
        return odd_support(body, angle) / math.cos(angle)

    fd = (f(phi + step) - f(phi - step)) / (2.0 * step)
    formula = middle_point(body, phi)[1] / cos_phi ** 2
    return InterceptDiagnostic(f=f(phi), derivative_fd=fd, derivative_formula=formula)


def position_at_corner(polygon: ConvexPolygon, corner: Rat2, normal: Rat2) -> ConvexPolygon:
    """Similarity taking ``corner`` to 0 and the outer normal ``normal`` to -e_2.

    If ``normal`` strictly supports conv M_P at ``corner``, every other hull
    point ends up with positive second coordinate.
    """
    b = neg(normal)

    def move(v: Rat2) -> Rat2:
        w = sub(v, corner)
        return Rat2(b.y * w.x - b.x * w.y, dot(b, w))

    return make_polygon([move(v) for v in polygon.vertices])
