"""Convex bodies: exact polygons and smooth support-function bodies."""
import bisect
import logging
import math
import random
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .config_manager import SamplingSettings, SandwichSettings, load_settings
from .errors import (
    ApproximationFailure,
    NonConvexInput,
    ParallelEdges,
    PreconditionError,
    RadiusTooSmall,
)
from .kernel import (
    Rat2,
    Segment,
    add,
    convex_hull,
    cross,
    distance_sq_to_convex,
    dot,
    midpoint,
    neg,
    orient,
    outer_normal,
    point_in_convex,
    rat2,
    signed_area,
    sub,
    to_float_array,
)
from .models import ArcPiece, Body, ConvexPolygon, EdgeNormalFan, FourierTerm, SmoothBody, SupportResult

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
# Elementary rotation with tan(angle / 2) = 1/257; cos and sin are exact rationals.
ROTATION_TANGENT = Fraction(1, 257)
_ROT_COS = (1 - ROTATION_TANGENT ** 2) / (1 + ROTATION_TANGENT ** 2)
_ROT_SIN = 2 * ROTATION_TANGENT / (1 + ROTATION_TANGENT ** 2)
ROTATION_ANGLE = 2.0 * math.atan(1 / 257)

# Relative tolerance for the float checks on smooth bodies.
SMOOTH_TOL = 1e-9


# --- polygons ---------------------------------------------------------------

def make_polygon(points: Iterable) -> ConvexPolygon:
    """Builds a ConvexPolygon, accepting clockwise input; raises NonConvexInput."""
    cycle = [p if isinstance(p, Rat2) else rat2(p[0], p[1]) for p in points]
    if len(cycle) < 3:
        raise NonConvexInput(f"A polygon needs at least 3 vertices, got {len(cycle)}")
    if len(set(cycle)) != len(cycle):
        raise NonConvexInput("Duplicate polygon vertices")
    if signed_area(cycle) < 0:
        cycle.reverse()
    n = len(cycle)
    for i in range(n):
        if orient(cycle[i - 1], cycle[i], cycle[(i + 1) % n]) <= 0:
            raise NonConvexInput(f"Vertex {i} is not a strictly convex ccw turn")
    hull = convex_hull(cycle)
    if len(hull.vertices) != n:
        raise NonConvexInput("Vertex cycle winds more than once")
    return ConvexPolygon(vertices=tuple(cycle))


def translate(body: Body, shift) -> Body:
    if isinstance(body, ConvexPolygon):
        t = shift if isinstance(shift, Rat2) else rat2(*shift)
        return ConvexPolygon(vertices=tuple(add(v, t) for v in body.vertices))
    tx, ty = float(shift[0]), float(shift[1])
    if body.kind == "fourier":
        terms = {term.j: term for term in body.terms}
        first = terms.get(1, FourierTerm(j=1))
        terms[1] = FourierTerm(j=1, a=first.a + tx, b=first.b + ty)
        return body.model_copy(update={"terms": [terms[j] for j in sorted(terms)]})
    arcs = [arc.model_copy(update={"center": (arc.center[0] + tx, arc.center[1] + ty)}) for arc in body.arcs]
    return body.model_copy(update={"arcs": arcs})


def edge_vectors(polygon: ConvexPolygon) -> List[Rat2]:
    return [sub(b, a) for a, b in polygon.edges()]


def parallel_edge_pairs(polygon: ConvexPolygon) -> List[Tuple[int, int]]:
    vectors = edge_vectors(polygon)
    return [
        (i, j)
        for i in range(len(vectors))
        for j in range(i + 1, len(vectors))
        if cross(vectors[i], vectors[j]) == 0
    ]


def check_no_parallel_edges(polygon: ConvexPolygon) -> None:
    pairs = parallel_edge_pairs(polygon)
    if pairs:
        i, j = pairs[0]
        raise ParallelEdges(f"Edges {i} and {j} are parallel")


def diameter(polygon: ConvexPolygon) -> float:
    pts = to_float_array(polygon.vertices)
    diffs = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((diffs ** 2).sum(axis=-1).max()))


def _rotate(v: Rat2, steps: int) -> Rat2:
    for _ in range(steps):
        v = Rat2(_ROT_COS * v.x - _ROT_SIN * v.y, _ROT_SIN * v.x + _ROT_COS * v.y)
    return v


def edge_normal_fan(polygon: ConvexPolygon) -> EdgeNormalFan:
    """Half-turn reduced edge normals, sorted by angle in (-pi/2, pi/2).

    When an edge is horizontal the polygon is rotated by a rational rotation
    (possibly several times) until no normal is vertical.
    """
    check_no_parallel_edges(polygon)
    normals = [outer_normal(e) for e in edge_vectors(polygon)]
    for steps in range(len(normals) + 2):
        rotated = [_rotate(n, steps) for n in normals]
        if all(n.x != 0 for n in rotated):
            break
    else:  # pragma: no cover - at most k directions are forbidden
        raise ParallelEdges("No admissible rotation found")

    flags = [n.x > 0 for n in rotated]
    reps = [n if flag else neg(n) for n, flag in zip(rotated, flags)]

    def by_slope(a: int, b: int) -> int:
        # x > 0 for both, so the slope order is the angle order
        value = reps[a].y * reps[b].x - reps[b].y * reps[a].x
        return (value > 0) - (value < 0)

    order = sorted(range(len(reps)), key=cmp_to_key(by_slope))
    if steps:
        logger.debug("Rotated polygon by %d elementary steps before fan analysis", steps)
    return EdgeNormalFan(
        rotation=steps * ROTATION_ANGLE,
        rotation_steps=steps,
        angles=tuple(math.atan2(float(reps[e].y), float(reps[e].x)) for e in order),
        edge_of=tuple(order),
        outer_flag=tuple(flags[e] for e in order),
        normals=tuple(normals[e] if flags[e] else neg(normals[e]) for e in order),
    )


def _angle_cmp(a: Rat2, b: Rat2) -> int:
    """Orders directions by angle in [0, 2 pi)."""
    ha = 0 if (a.y > 0 or (a.y == 0 and a.x > 0)) else 1
    hb = 0 if (b.y > 0 or (b.y == 0 and b.x > 0)) else 1
    if ha != hb:
        return ha - hb
    c = cross(a, b)
    return -1 if c > 0 else (1 if c < 0 else 0)


def sort_directions(directions: Sequence[Rat2]) -> List[Rat2]:
    return sorted(directions, key=cmp_to_key(_angle_cmp))


def extreme_vertex(polygon: ConvexPolygon, direction: Rat2) -> int:
    """Index of the vertex maximizing <v, direction> (first one on ties)."""
    values = [dot(v, direction) for v in polygon.vertices]
    return values.index(max(values))


class OppositePair(NamedTuple):
    p: int  # maximizes <v, witness>
    q: int  # minimizes <v, witness>
    witness: Rat2


def opposite_vertex_pairs(polygon: ConvexPolygon) -> List[OppositePair]:
    """All strictly opposite vertex pairs, by a rotating-calipers sweep.

    Each open arc between consecutive directions of {n_e} U {-n_e} has a
    unique maximizing and a unique minimizing vertex; the pair is recorded with
    a direction inside the arc as witness.
    """
    k = polygon.k
    events = []
    for e, a_b in enumerate(polygon.edges()):
        n = outer_normal(sub(a_b[1], a_b[0]))
        events.append((n, "max", e))
        events.append((neg(n), "min", e))
    events.sort(key=cmp_to_key(lambda a, b: _angle_cmp(a[0], b[0])))

    pairs: List[OppositePair] = []
    p_idx: Optional[int] = None
    q_idx: Optional[int] = None
    for idx in range(len(events)):
        d_a, kind, e = events[idx]
        d_b = events[(idx + 1) % len(events)][0]
        if p_idx is not None:
            if kind == "max":
                p_idx = (e + 1) % k
            else:
                q_idx = (e + 1) % k
        if cross(d_a, d_b) == 0 and dot(d_a, d_b) > 0:
            continue  # empty arc between equal directions
        witness = add(d_a, d_b)
        if p_idx is None:
            p_idx = extreme_vertex(polygon, witness)
            q_idx = extreme_vertex(polygon, neg(witness))
        pairs.append(OppositePair(p_idx, q_idx, witness))
    return pairs


def are_opposite(polygon: ConvexPolygon, a: Rat2, b: Rat2) -> bool:
    verts = polygon.vertices
    return any(
        {verts[pair.p], verts[pair.q]} == {a, b} for pair in opposite_vertex_pairs(polygon)
    )


def has_long_edge(polygon: ConvexPolygon) -> Tuple[bool, Optional[Tuple[int, Rat2]]]:
    """True iff some edge joins two opposite vertices; witness (edge index, direction)."""
    k = polygon.k
    for pair in opposite_vertex_pairs(polygon):
        if (pair.p + 1) % k == pair.q:
            return True, (pair.p, pair.witness)
        if (pair.q + 1) % k == pair.p:
            return True, (pair.q, pair.witness)
    return False, None


# --- smooth bodies ----------------------------------------------------------

def make_fourier(a0: float, terms: Iterable, settings: Optional[SamplingSettings] = None) -> SmoothBody:
    parsed = [t if isinstance(t, FourierTerm) else FourierTerm(j=int(t[0]), a=float(t[1]), b=float(t[2])) for t in terms]
    body = SmoothBody(kind="fourier", a0=float(a0), terms=sorted(parsed, key=lambda t: t.j))
    settings = settings or load_settings(SamplingSettings, "sampling")
    phi = np.linspace(0.0, TWO_PI, settings.fourier_check_grid, endpoint=False)
    radius_of_curvature = np.full_like(phi, body.a0)
    for term in body.terms:
        radius_of_curvature += (1 - term.j ** 2) * (term.a * np.cos(term.j * phi) + term.b * np.sin(term.j * phi))
    if radius_of_curvature.min() <= 0:
        raise NonConvexInput("Fourier support function has h + h'' <= 0 somewhere")
    return body


def make_arcgon(arcs: Iterable) -> SmoothBody:
    """Validates the partition of the normal circle and tangent continuity."""
    pieces = [a if isinstance(a, ArcPiece) else ArcPiece(**a) for a in arcs]
    if not pieces:
        raise NonConvexInput("An arcgon needs at least one arc")
    scale = max(1.0, max(abs(c) for a in pieces for c in a.center), max(a.radius for a in pieces))
    for a, b in zip(pieces, pieces[1:]):
        if abs(a.end - b.start) > 1e-12 * max(1.0, abs(b.start)):
            raise NonConvexInput("Arc normal intervals must be contiguous")
    if abs(pieces[-1].end - pieces[0].start - TWO_PI) > 1e-9:
        raise NonConvexInput("Arc normal intervals must cover the circle exactly once")
    if all(a.radius == 0 for a in pieces):
        raise NonConvexInput("An arcgon needs at least one arc of positive radius")
    for idx, a in enumerate(pieces):
        b = pieces[(idx + 1) % len(pieces)]
        u = (math.cos(a.end), math.sin(a.end))
        end_a = (a.center[0] + a.radius * u[0], a.center[1] + a.radius * u[1])
        start_b = (b.center[0] + b.radius * u[0], b.center[1] + b.radius * u[1])
        if math.hypot(end_a[0] - start_b[0], end_a[1] - start_b[1]) > SMOOTH_TOL * scale:
            raise NonConvexInput(f"Arcs {idx} and {(idx + 1) % len(pieces)} are not tangent-continuous")
    return SmoothBody(kind="arcgon", arcs=pieces)


def _arc_index(body: SmoothBody, phi: np.ndarray) -> np.ndarray:
    base = body.arcs[0].start
    starts = np.array([a.start for a in body.arcs])
    shifted = base + np.mod(phi - base, TWO_PI)
    return np.clip(np.searchsorted(starts, shifted, side="right") - 1, 0, len(body.arcs) - 1)


def _arc_arrays(body: SmoothBody, phi: np.ndarray):
    idx = _arc_index(body, phi)
    centers = np.array([a.center for a in body.arcs], dtype=float)
    radii = np.array([a.radius for a in body.arcs], dtype=float)
    return centers[idx], radii[idx], idx


def support_values(body: Body, phi: np.ndarray) -> np.ndarray:
    """h(K, u(phi)) on an array of angles, as floats."""
    phi = np.asarray(phi, dtype=float)
    u = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    if isinstance(body, ConvexPolygon):
        return (u @ to_float_array(body.vertices).T).max(axis=-1)
    if body.kind == "fourier":
        h = np.full_like(phi, body.a0)
        for term in body.terms:
            h = h + term.a * np.cos(term.j * phi) + term.b * np.sin(term.j * phi)
        return h
    centers, radii, _ = _arc_arrays(body, phi)
    return (centers * u).sum(axis=-1) + radii


def support_derivative(body: SmoothBody, phi: np.ndarray) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    if body.kind == "fourier":
        dh = np.zeros_like(phi)
        for term in body.terms:
            dh = dh + term.j * (-term.a * np.sin(term.j * phi) + term.b * np.cos(term.j * phi))
        return dh
    centers, _, _ = _arc_arrays(body, phi)
    du = np.stack([-np.sin(phi), np.cos(phi)], axis=-1)
    return (centers * du).sum(axis=-1)


def boundary_points(body: SmoothBody, phi: np.ndarray) -> np.ndarray:
    """x_K(u(phi)) = h u + h' u', shape (n, 2)."""
    phi = np.asarray(phi, dtype=float)
    u = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    if body.kind == "arcgon":
        centers, radii, _ = _arc_arrays(body, phi)
        return centers + radii[:, None] * u
    du = np.stack([-np.sin(phi), np.cos(phi)], axis=-1)
    return support_values(body, phi)[:, None] * u + support_derivative(body, phi)[:, None] * du


def support(body: Body, u) -> SupportResult:
    """Support value and face in direction ``u`` (exact for polygons)."""
    if isinstance(body, ConvexPolygon):
        d = u if isinstance(u, Rat2) else rat2(u[0], u[1])
        if d.x == 0 and d.y == 0:
            raise PreconditionError("Support direction must be nonzero")
        values = [dot(v, d) for v in body.vertices]
        best = max(values)
        hits = [i for i, value in enumerate(values) if value == best]
        if len(hits) == 1:
            face = Segment.between(body.vertices[hits[0]], body.vertices[hits[0]])
        else:
            i, j = hits
            if (i + 1) % body.k != j:
                i, j = j, i
            face = Segment.between(body.vertices[i], body.vertices[j])
        return SupportResult(value=best, face=face)
    ux, uy = float(u[0]), float(u[1])
    norm = math.hypot(ux, uy)
    if norm == 0:
        raise PreconditionError("Support direction must be nonzero")
    phi = np.array([math.atan2(uy, ux)])
    point = boundary_points(body, phi)[0]
    return SupportResult(value=float(support_values(body, phi)[0]) * norm, face=(float(point[0]), float(point[1])))


def breakpoints(body: SmoothBody) -> List[float]:
    """Angles where the arcgon support function is not twice differentiable."""
    if body.kind != "arcgon" or len(body.arcs) < 2:
        return []
    return [a.start for a in body.arcs]


# --- symmetry ---------------------------------------------------------------

def is_centrally_symmetric(body: Body) -> Tuple[bool, Optional[Union[Rat2, Tuple[float, float]]]]:
    if isinstance(body, ConvexPolygon):
        n = body.k
        if n % 2:
            return False, None
        half = n // 2
        center = midpoint(body.vertices[0], body.vertices[half])
        twice = add(center, center)
        for i in range(half):
            if add(body.vertices[i], body.vertices[i + half]) != twice:
                return False, None
        return True, center
    if body.kind == "fourier":
        # the j = 1 harmonic is a translation with center (a_1, b_1)
        odd = [t for t in body.terms if t.j % 2 == 1 and t.j > 1]
        if any(abs(t.a) > 1e-12 or abs(t.b) > 1e-12 for t in odd):
            return False, None
        first = next((t for t in body.terms if t.j == 1), FourierTerm(j=1))
        return True, (first.a, first.b)
    phi = np.linspace(0.0, math.pi, 2048, endpoint=False)
    odd_part = 0.5 * (support_values(body, phi) - support_values(body, phi + math.pi))
    design = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    center, *_ = np.linalg.lstsq(design, odd_part, rcond=None)
    residual = np.abs(design @ center - odd_part).max()
    scale = max(1.0, float(np.abs(support_values(body, phi)).max()))
    if residual > SMOOTH_TOL * scale:
        return False, None
    return True, (float(center[0]), float(center[1]))


# --- sandwich polygon ---------------------------------------------------------

def rational_direction(theta: float, max_denominator: int) -> Rat2:
    """Exact unit vector near angle ``theta`` from a rational half-angle tangent."""
    theta = math.remainder(theta, TWO_PI)
    t = Fraction(math.tan(theta / 2.0)).limit_denominator(max_denominator)
    denom = 1 + t * t
    return Rat2((1 - t * t) / denom, 2 * t / denom)


def _support_fraction(body: Body, u: Rat2) -> Fraction:
    """h(K, u) exactly for polygons; rounded up to a dyadic rational otherwise."""
    if isinstance(body, ConvexPolygon):
        return max(dot(v, u) for v in body.vertices)
    value = float(support_values(body, np.array([math.atan2(float(u.y), float(u.x))]))[0])
    quantum = 2 ** 30
    return Fraction(math.ceil(value * quantum), quantum)


def _line_intersection(u1: Rat2, c1: Fraction, u2: Rat2, c2: Fraction) -> Rat2:
    det = cross(u1, u2)
    return Rat2((c1 * u2.y - c2 * u1.y) / det, (u1.x * c2 - u2.x * c1) / det)


def _outer_containment(body: Body, polygon: ConvexPolygon, eps: Fraction, grid: int) -> bool:
    if isinstance(body, ConvexPolygon):
        eps_sq = eps * eps
        return all(distance_sq_to_convex(body.vertices, v) < eps_sq for v in polygon.vertices)
    phi = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    h = support_values(body, phi)
    u = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    gaps = to_float_array(polygon.vertices) @ u.T - h[None, :]
    return float(gaps.max()) < float(eps)


def inner_containment(body: Body, polygon: ConvexPolygon) -> bool:
    """K inside int P: exact for polygon K, support comparison at the edge normals otherwise."""
    if isinstance(body, ConvexPolygon):
        return all(point_in_convex(polygon.vertices, v, strict=True) for v in body.vertices)
    for a, b in polygon.edges():
        n = outer_normal(sub(b, a))
        h = float(support_values(body, np.array([math.atan2(float(n.y), float(n.x))]))[0])
        length = math.hypot(float(n.x), float(n.y))
        if h * length >= float(dot(a, n)):
            return False
    return True


def outer_containment(body: Body, polygon: ConvexPolygon, eps: Fraction, grid: int = 2048) -> bool:
    """P inside int(K + eps B^2): exact for polygon K, grid-checked otherwise."""
    return _outer_containment(body, polygon, eps, grid)


def to_fraction(value) -> Fraction:
    """Rationalizes a float from its decimal text, so 0.1 becomes 1/10."""
    if isinstance(value, Fraction):
        return value
    return Fraction(str(value))


def sandwich_polygon(
    body: Body,
    eps,
    seed: int = 0,
    settings: Optional[SandwichSettings] = None,
) -> ConvexPolygon:
    """A verified polygon P with K in int P, P in int(K + eps B^2).

    P has no parallel edges and no long edge. Directions are an odd, jittered
    uniform set, so opposite directions never occur before rounding; every
    property is still checked exactly and the draw is repeated with two more
    directions when a check fails.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    settings = settings or load_settings(SandwichSettings, "sandwich")
    offset = settings.offset_fraction * eps
    rng = random.Random(seed)

    for attempt in range(settings.max_attempts):
        n = settings.initial_vertices + 2 * attempt
        if n % 2 == 0:
            n += 1
        step = TWO_PI / n
        base = rng.uniform(0.0, TWO_PI)
        thetas = [base + j * step + settings.jitter * step * rng.uniform(-1.0, 1.0) for j in range(n)]
        directions = sort_directions(
            {rational_direction(theta, settings.tangent_denominator) for theta in thetas}
        )
        if len(directions) != n:
            logger.debug("Sandwich attempt %d: duplicate directions after rounding", attempt)
            continue
        offsets = [_support_fraction(body, u) + offset for u in directions]
        vertices = [
            _line_intersection(directions[j], offsets[j], directions[(j + 1) % n], offsets[(j + 1) % n])
            for j in range(n)
        ]
        try:
            polygon = make_polygon(vertices)
        except NonConvexInput as e:
            logger.debug("Sandwich attempt %d rejected: %s", attempt, e)
            continue
        if parallel_edge_pairs(polygon):
            logger.debug("Sandwich attempt %d rejected: parallel edges", attempt)
            continue
        long_edge, _ = has_long_edge(polygon)
        if long_edge:
            logger.debug("Sandwich attempt %d rejected: long edge", attempt)
            continue
        if not inner_containment(body, polygon):
            logger.debug("Sandwich attempt %d rejected: K not interior", attempt)
            continue
        if not _outer_containment(body, polygon, eps, settings.smooth_check_samples):
            logger.debug("Sandwich attempt %d rejected: vertex farther than eps from K", attempt)
            continue
        logger.info("Sandwich polygon with %d vertices found on attempt %d", n, attempt)
        return polygon
    raise ApproximationFailure(
        f"No verified sandwich polygon after {settings.max_attempts} attempts (eps={eps})"
    )


# --- arc smoothing ------------------------------------------------------------

def smooth_by_arcs(polygon: ConvexPolygon, radius: float, rounding: Optional[float] = None) -> SmoothBody:
    """Replaces every edge by an arc of radius ``radius`` and rounds the result.

    Vertices become radius-0 arcs; adding the rounding disk to every radius
    makes the body strictly convex. The default rounding is the largest arc
    sagitta, which keeps delta(M, Q) below twice that value.
    """
    pts = to_float_array(polygon.vertices)
    k = len(pts)
    edges = np.roll(pts, -1, axis=0) - pts
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    if radius <= lengths.max() / 2.0:
        raise RadiusTooSmall(f"R = {radius} must exceed half the longest edge ({lengths.max() / 2.0})")
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=-1) / lengths[:, None]
    theta = np.unwrap(np.arctan2(normals[:, 1], normals[:, 0]))
    half_widths = np.arcsin(lengths / (2.0 * radius))
    sagittas = radius - np.sqrt(radius ** 2 - lengths ** 2 / 4.0)
    rho = float(sagittas.max()) if rounding is None else float(rounding)
    if rho < 0:
        raise PreconditionError("rounding must be nonnegative")

    arcs: List[ArcPiece] = []
    for e in range(k):
        mid = (pts[e] + pts[(e + 1) % k]) / 2.0
        center = mid - math.sqrt(radius ** 2 - lengths[e] ** 2 / 4.0) * normals[e]
        start = theta[e] - half_widths[e]
        end = theta[e] + half_widths[e]
        next_theta = theta[e + 1] - half_widths[e + 1] if e + 1 < k else theta[0] - half_widths[0] + TWO_PI
        if next_theta - end <= 0:
            raise RadiusTooSmall(f"R = {radius} exceeds the normal cone at vertex {(e + 1) % k}")
        arcs.append(ArcPiece(center=(float(center[0]), float(center[1])), radius=radius + rho, start=float(start), end=float(end)))
        vertex = pts[(e + 1) % k]
        arcs.append(ArcPiece(center=(float(vertex[0]), float(vertex[1])), radius=rho, start=float(end), end=float(next_theta)))
    # tangent continuity holds by construction up to rounding of the centers
    return SmoothBody(kind="arcgon", arcs=arcs)


def support_distance(a: Body, b: Body, n: int = 2048) -> float:
    """delta(A, B) as the sup-norm of h_A - h_B on an n-point angle grid."""
    phi = np.linspace(0.0, TWO_PI, n, endpoint=False)
    return float(np.abs(support_values(a, phi) - support_values(b, phi)).max())


def random_polygon(rng: random.Random, vertex_count: int, radius: int = 1000) -> ConvexPolygon:
    """Random integer-coordinate convex polygon without parallel edges."""
    step = TWO_PI / vertex_count
    while True:
        base = rng.uniform(0.0, TWO_PI)
        angles = [base + (j + rng.uniform(-0.35, 0.35)) * step for j in range(vertex_count)]
        # points on an ellipse stay in convex position after rounding
        stretch = rng.uniform(0.5, 1.5)
        points = {(round(radius * stretch * math.cos(a)), round(radius * math.sin(a))) for a in angles}
        hull = convex_hull(rat2(x, y) for x, y in points)
        if len(hull.vertices) != vertex_count:
            continue
        polygon = ConvexPolygon(vertices=hull.vertices)
        if not parallel_edge_pairs(polygon):
            return polygon
