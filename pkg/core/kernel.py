"""Exact planar primitives.

Every polygon-side computation here uses ``fractions.Fraction`` so that the
sign decisions made by the hedgehog and convexity modules are never wrong.
The float helpers at the bottom (``hausdorff_distance``, ``float_hull_indices``,
``float_area``) work on numpy sample arrays of smooth bodies.
"""
from fractions import Fraction
from typing import Iterable, List, Literal, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

Scalar = Union[int, Fraction]


class Rat2(NamedTuple):
    """A point (or vector) with exact rational coordinates."""
    x: Fraction
    y: Fraction

    def __repr__(self) -> str:
        return f"Rat2({self.x}, {self.y})"


def rat2(x, y) -> Rat2:
    """Builds a Rat2 from anything ``Fraction`` accepts ("3/4", 2, Fraction)."""
    return Rat2(Fraction(x), Fraction(y))


def add(a: Rat2, b: Rat2) -> Rat2:
    return Rat2(a.x + b.x, a.y + b.y)


def sub(a: Rat2, b: Rat2) -> Rat2:
    return Rat2(a.x - b.x, a.y - b.y)


def scale(a: Rat2, k: Scalar) -> Rat2:
    return Rat2(a.x * k, a.y * k)


def midpoint(a: Rat2, b: Rat2) -> Rat2:
    return Rat2((a.x + b.x) / 2, (a.y + b.y) / 2)


def neg(a: Rat2) -> Rat2:
    return Rat2(-a.x, -a.y)


def dot(a: Rat2, b: Rat2) -> Fraction:
    return a.x * b.x + a.y * b.y


def cross(a: Rat2, b: Rat2) -> Fraction:
    return a.x * b.y - a.y * b.x


def perp(a: Rat2) -> Rat2:
    """Rotation by +90 degrees."""
    return Rat2(-a.y, a.x)


def outer_normal(edge: Rat2) -> Rat2:
    """Outer normal of an edge vector of a counterclockwise polygon."""
    return Rat2(edge.y, -edge.x)


def orient(a: Rat2, b: Rat2, c: Rat2) -> int:
    """Sign of the cross product (b - a) x (c - a)."""
    value = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (value > 0) - (value < 0)


def same_direction(u: Rat2, v: Rat2) -> bool:
    return cross(u, v) == 0 and dot(u, v) > 0


def doubled(v: Rat2) -> Rat2:
    """Direction at twice the angle of ``v``; identifies v with -v.

    Cyclic order of unoriented lines equals counterclockwise order of the
    doubled vectors, so fan comparisons reduce to cross products.
    """
    return Rat2(v.x * v.x - v.y * v.y, 2 * v.x * v.y)


def in_open_arc(start: Rat2, end: Rat2, v: Rat2) -> bool:
    """True iff direction ``v`` lies strictly inside the ccw arc from ``start`` to ``end``."""
    turn = cross(start, end)
    if turn > 0:
        return cross(start, v) > 0 and cross(v, end) > 0
    if turn < 0:
        in_closed_complement = cross(end, v) >= 0 and cross(v, start) >= 0
        if cross(end, v) == 0 and dot(end, v) < 0:
            in_closed_complement = False
        if cross(v, start) == 0 and dot(v, start) < 0:
            in_closed_complement = False
        return not in_closed_complement
    if dot(start, end) < 0:
        return cross(start, v) > 0
    # start and end coincide: the whole circle minus one direction
    return not same_direction(start, v)


class Segment(BaseModel):
    """A segment from ``a`` to ``b``; a == b only when flagged degenerate."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Rat2
    b: Rat2
    degenerate: bool = Field(False, description="True for a singleton (a == b)")

    @classmethod
    def between(cls, a: Rat2, b: Rat2) -> "Segment":
        return cls(a=a, b=b, degenerate=(a == b))

    @property
    def endpoints(self) -> Tuple[Rat2, ...]:
        return (self.a,) if self.degenerate else (self.a, self.b)


class HullPolygon(BaseModel):
    """Counterclockwise strictly convex vertex cycle.

    One vertex means a point hull, two a segment hull; both are valid values.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vertices: Tuple[Rat2, ...] = Field(..., min_length=1)

    @property
    def kind(self) -> Literal["point", "segment", "polygon"]:
        n = len(self.vertices)
        return "point" if n == 1 else "segment" if n == 2 else "polygon"

    @property
    def is_degenerate(self) -> bool:
        return len(self.vertices) < 3

    def __len__(self) -> int:
        return len(self.vertices)


def convex_hull(points: Iterable[Rat2]) -> HullPolygon:
    """Monotone chain hull that keeps exposed points only.

    Collinear boundary points and duplicates are dropped, so the output is the
    minimal strictly convex cycle (or a flagged point/segment hull).
    """
    pts = sorted(set(points))
    if not pts:
        raise ValueError("convex_hull needs at least one point")
    if len(pts) <= 2:
        return HullPolygon(vertices=tuple(pts))

    lower: List[Rat2] = []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Rat2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    cycle = lower[:-1] + upper[:-1]
    if len(cycle) < 2:  # all points equal after dedup cannot happen here
        cycle = [pts[0], pts[-1]]
    return HullPolygon(vertices=tuple(cycle))


def signed_area(vertices: Sequence[Rat2]) -> Fraction:
    n = len(vertices)
    if n < 3:
        return Fraction(0)
    total = Fraction(0)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        total += a.x * b.y - a.y * b.x
    return total / 2


def area(polygon: Union[HullPolygon, Sequence[Rat2]]) -> Fraction:
    """Shoelace area; zero for point and segment hulls."""
    vertices = polygon.vertices if isinstance(polygon, HullPolygon) else polygon
    return abs(signed_area(vertices))


def clip_halfplane(vertices: Sequence[Rat2], normal: Rat2, offset: Fraction) -> List[Rat2]:
    """One Sutherland-Hodgman pass keeping the points with <x, normal> <= offset."""
    output: List[Rat2] = []
    n = len(vertices)
    if n == 0:
        return output
    if n == 1:
        return list(vertices) if dot(vertices[0], normal) <= offset else []
    for i in range(n):
        cur, nxt = vertices[i], vertices[(i + 1) % n]
        cur_side = dot(cur, normal) - offset
        nxt_side = dot(nxt, normal) - offset
        if cur_side <= 0:
            output.append(cur)
        if (cur_side < 0 < nxt_side) or (nxt_side < 0 < cur_side):
            t = cur_side / (cur_side - nxt_side)
            output.append(Rat2(cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)))
    return output


def _edge_halfplanes(hull: HullPolygon) -> List[Tuple[Rat2, Fraction]]:
    verts = hull.vertices
    planes = []
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        normal = outer_normal(sub(b, a))
        planes.append((normal, dot(normal, a)))
    return planes


def _clip_segment_or_point(piece: HullPolygon, clipper: HullPolygon) -> Optional[HullPolygon]:
    """Intersection when ``piece`` is degenerate and ``clipper`` is a polygon."""
    if piece.kind == "point":
        return piece if point_in_convex(clipper.vertices, piece.vertices[0]) else None
    a, b = piece.vertices
    lo, hi = Fraction(0), Fraction(1)
    direction = sub(b, a)
    for normal, offset in _edge_halfplanes(clipper):
        rate = dot(direction, normal)
        slack = offset - dot(a, normal)
        if rate == 0:
            if slack < 0:
                return None
            continue
        bound = slack / rate
        if rate > 0:
            hi = min(hi, bound)
        else:
            lo = max(lo, bound)
        if lo > hi:
            return None
    return convex_hull([add(a, scale(direction, lo)), add(a, scale(direction, hi))])


def _intersect_degenerate(p: HullPolygon, q: HullPolygon) -> Optional[HullPolygon]:
    """Both hulls are points or segments."""
    if p.kind == "point":
        p, q = q, p
    if q.kind == "point":
        point = q.vertices[0]
        if p.kind == "point":
            return q if p.vertices[0] == point else None
        a, b = p.vertices
        if orient(a, b, point) != 0:
            return None
        inside = min(a, b) <= point <= max(a, b)
        return q if inside else None
    a, b = p.vertices
    c, d = q.vertices
    if orient(a, b, c) == 0 and orient(a, b, d) == 0:
        lo = max(min(a, b), min(c, d))
        hi = min(max(a, b), max(c, d))
        return convex_hull([lo, hi]) if lo <= hi else None
    denom = cross(sub(b, a), sub(d, c))
    if denom == 0:
        return None
    t = cross(sub(c, a), sub(d, c)) / denom
    u = cross(sub(c, a), sub(b, a)) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        return convex_hull([add(a, scale(sub(b, a), t))])
    return None


def clip_convex(p: HullPolygon, q: HullPolygon) -> Optional[HullPolygon]:
    """Exact intersection of two convex hulls; ``None`` when empty."""
    if p.is_degenerate and q.is_degenerate:
        return _intersect_degenerate(p, q)
    if p.is_degenerate:
        return _clip_segment_or_point(p, q)
    if q.is_degenerate:
        return _clip_segment_or_point(q, p)
    current: List[Rat2] = list(p.vertices)
    for normal, offset in _edge_halfplanes(q):
        current = clip_halfplane(current, normal, offset)
        if not current:
            return None
    return convex_hull(current)


def point_in_convex(vertices: Sequence[Rat2], point: Rat2, strict: bool = False) -> bool:
    """Containment in a ccw strictly convex polygon (boundary counts unless ``strict``)."""
    n = len(vertices)
    for i in range(n):
        side = orient(vertices[i], vertices[(i + 1) % n], point)
        if side < 0 or (strict and side == 0):
            return False
    return True


def segment_distance_sq(point: Rat2, a: Rat2, b: Rat2) -> Fraction:
    ab = sub(b, a)
    length_sq = dot(ab, ab)
    if length_sq == 0:
        d = sub(point, a)
        return dot(d, d)
    t = dot(sub(point, a), ab) / length_sq
    t = min(max(t, Fraction(0)), Fraction(1))
    closest = add(a, scale(ab, t))
    d = sub(point, closest)
    return dot(d, d)


def distance_sq_to_convex(vertices: Sequence[Rat2], point: Rat2) -> Fraction:
    """Exact squared distance from a point to a ccw convex polygon (0 inside)."""
    if len(vertices) >= 3 and point_in_convex(vertices, point):
        return Fraction(0)
    n = len(vertices)
    if n == 1:
        d = sub(point, vertices[0])
        return dot(d, d)
    return min(segment_distance_sq(point, vertices[i], vertices[(i + 1) % n]) for i in range(n))


def to_float_array(points: Iterable[Rat2]) -> np.ndarray:
    return np.array([[float(p.x), float(p.y)] for p in points], dtype=float).reshape(-1, 2)


def hausdorff_distance(a: np.ndarray, b: np.ndarray, chunk_rows: int = 128) -> float:
    """Hausdorff distance of two finite point samples.

    This approximates the distance of the sampled compact sets; the error is
    bounded by the larger sampling gap of the two inputs. Rows of ``a`` are
    processed ``chunk_rows`` at a time.
    """
    a = np.asarray(a, dtype=float).reshape(-1, 2)
    b = np.asarray(b, dtype=float).reshape(-1, 2)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("hausdorff_distance needs two nonempty samples")
    shift = a.mean(axis=0)
    a, b = a - shift, b - shift
    b_sq = (b ** 2).sum(axis=1)
    rows = max(1, chunk_rows)
    col_min = np.full(len(b), np.inf)
    row_max = 0.0
    for start in range(0, len(a), rows):
        block = a[start:start + rows]
        d2 = (block ** 2).sum(axis=1)[:, None] + b_sq[None, :] - 2.0 * block @ b.T
        np.maximum(d2, 0.0, out=d2)
        row_max = max(row_max, float(d2.min(axis=1).max()))
        np.minimum(col_min, d2.min(axis=0), out=col_min)
    return float(np.sqrt(max(row_max, float(col_min.max()))))


def float_hull_indices(points: np.ndarray, tol: float = 0.0) -> List[int]:
    """Counterclockwise hull cycle of a float sample, as row indices.

    The same monotone chain as ``convex_hull``; turns not exceeding ``tol``
    count as collinear and are dropped.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    order = np.lexsort((points[:, 1], points[:, 0])).tolist()

    def turn(o: int, a: int, b: int) -> float:
        return (points[a, 0] - points[o, 0]) * (points[b, 1] - points[o, 1]) - (
            points[a, 1] - points[o, 1]
        ) * (points[b, 0] - points[o, 0])

    lower: List[int] = []
    for i in order:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], i) <= tol:
            lower.pop()
        lower.append(i)
    upper: List[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], i) <= tol:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def float_area(points: np.ndarray) -> float:
    """Shoelace area of a float vertex cycle."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    x, y = points[:, 0], points[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))
