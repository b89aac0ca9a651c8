"""Raises the number of hull vertices of the middle hedgehog by vertex-pair cuts.

Each cut replaces the two opposite vertices p, q behind a strong hull corner x
by short edges, so that x splits into two strong corners y, z that are both
hull vertices. Cuts are applied to a sandwich polygon of K until the requested
count is exceeded; the result can then be smoothed by arcs.
"""
import logging
import math
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from .body import (
    diameter,
    has_long_edge,
    inner_containment,
    are_opposite,
    is_centrally_symmetric,
    outer_containment,
    parallel_edge_pairs,
    rational_direction,
    sandwich_polygon,
    smooth_by_arcs,
    support_distance,
    support_values,
    to_fraction,
)
from .config_manager import (
    PerturbSettings,
    SandwichSettings,
    SmoothingSettings,
    load_settings,
)
from .errors import (
    CentrallySymmetric,
    InternalInvariantError,
    InvariantRegression,
    PreconditionError,
    RadiusScheduleExhausted,
    RadiusTooSmall,
    SearchExhausted,
)
from .hedgehog import hedgehog_hull, polygon_hedgehog, smooth_hedgehog, smooth_hull_summary
from .kernel import (
    Rat2,
    add,
    convex_hull,
    cross,
    doubled,
    dot,
    in_open_arc,
    outer_normal,
    perp,
    point_in_convex,
    scale,
    sub,
)
from .models import (
    Body,
    ConvexPolygon,
    Corner,
    CutConstruction,
    HedgehogHull,
    MiddleHedgehog,
    PerturbationTrace,
    SmoothBody,
    SmoothingCertificate,
    TraceStep,
)

logger = logging.getLogger(__name__)


class CutTarget(NamedTuple):
    corner: Corner
    support_normal: Rat2  # outer normal of a support line S of the hull meeting it only at the corner


def _bit_size(point: Rat2) -> int:
    return sum(c.numerator.bit_length() + c.denominator.bit_length() for c in point)


def _angle(v: Rat2) -> float:
    return math.atan2(float(v.y), float(v.x))


def _reduced_angle(v: Rat2) -> float:
    """Angle of the line normal to ``v``'s edge, folded into (-pi/2, pi/2]."""
    a = _angle(v)
    if a > math.pi / 2:
        a -= math.pi
    elif a <= -math.pi / 2:
        a += math.pi
    return a


def support_normal_at(hull: HedgehogHull, index: int, denominators: List[int]) -> Rat2:
    """A simple rational direction strictly inside the normal cone of hull vertex ``index``."""
    verts = hull.hull.vertices
    n = len(verts)
    x = verts[index]
    prev, nxt = verts[index - 1], verts[(index + 1) % n]
    n1 = outer_normal(sub(x, prev))
    n2 = outer_normal(sub(nxt, x))
    a1 = _angle(n1)
    span = (_angle(n2) - a1) % (2 * math.pi)
    if span == 0.0:
        span = math.pi
    for fraction in (0.5, 0.25, 0.75):
        for denominator in denominators:
            w = rational_direction(a1 + fraction * span, denominator)
            if in_open_arc(n1, n2, w):
                return w
    if cross(n1, n2) > 0:
        return add(n1, n2)
    return perp(n1)


def cut_targets(
    polygon: ConvexPolygon,
    hedgehog: Optional[MiddleHedgehog] = None,
    settings: Optional[PerturbSettings] = None,
) -> List[CutTarget]:
    """Strong hull corners with their support normals, simplest coordinates first."""
    settings = settings or load_settings(PerturbSettings, "perturb")
    hedgehog = hedgehog or polygon_hedgehog(polygon)
    hull = hedgehog_hull(hedgehog)
    if hull.vertex_count < 2:
        raise PreconditionError("The hedgehog hull is a single point; the polygon is centrally symmetric")
    targets = [
        CutTarget(corner, support_normal_at(hull, idx, settings.support_denominators))
        for idx, corner in enumerate(hull.hull_corners)
    ]
    targets.sort(key=lambda t: _bit_size(t.corner.location))
    return targets


def select_cut_target(polygon: ConvexPolygon, settings: Optional[PerturbSettings] = None) -> CutTarget:
    """Hull vertex x of H_P of least bit complexity and a support line S with S n conv H_P = {x}.

    Requires no parallel edges, no long edge and no central symmetry.
    """
    if has_long_edge(polygon)[0]:
        raise PreconditionError("Polygon has a long edge")
    if is_centrally_symmetric(polygon)[0]:
        raise CentrallySymmetric("A centrally symmetric polygon has a one-point hedgehog")
    return cut_targets(polygon, settings=settings)[0]


class _Roles(NamedTuple):
    anchor: Rat2
    a: Rat2  # along the anchor's edge at the corner
    b: Rat2  # along the anchor's other edge
    partner: Rat2
    c: Rat2  # along the partner's other edge
    d: Rat2  # along the partner's edge at the corner
    near_anchor: Tuple[Rat2, Rat2]
    near_partner: Tuple[Rat2, Rat2]
    other_anchor: Tuple[Rat2, Rat2]
    other_partner: Tuple[Rat2, Rat2]
    swapped: bool


def _other_end(edge: Tuple[Rat2, Rat2], v: Rat2) -> Rat2:
    return edge[1] if edge[0] == v else edge[0]


def _edge_at(polygon: ConvexPolygon, v: Rat2, not_edge: Tuple[Rat2, Rat2]) -> Tuple[Rat2, Rat2]:
    for edge in polygon.edges():
        if v in edge and edge != not_edge:
            return edge
    raise InternalInvariantError(f"Vertex {v} has no second edge")


def _role_assignments(polygon: ConvexPolygon, corner: Corner, hedgehog: MiddleHedgehog) -> List[_Roles]:
    fan = hedgehog.fan
    i, j = corner.between
    e_i = polygon.edge(fan.edge_of[i])
    e_i1 = polygon.edge(fan.edge_of[j])
    v1, v2 = corner.opposite_pair
    if v1 in e_i and v2 in e_i1:
        p, q = v1, v2
    elif v2 in e_i and v1 in e_i1:
        p, q = v2, v1
    else:
        raise InternalInvariantError(f"Corner {corner.location} is not spanned by its two edges")
    e_j = _edge_at(polygon, p, e_i)
    e_m = _edge_at(polygon, q, e_i1)

    def roles(anchor, near_a, other_a, partner, near_b, other_b, swapped) -> _Roles:
        return _Roles(
            anchor=anchor,
            a=sub(_other_end(near_a, anchor), anchor),
            b=sub(_other_end(other_a, anchor), anchor),
            partner=partner,
            c=sub(_other_end(other_b, partner), partner),
            d=sub(_other_end(near_b, partner), partner),
            near_anchor=near_a,
            near_partner=near_b,
            other_anchor=other_a,
            other_partner=other_b,
            swapped=swapped,
        )

    return [
        roles(p, e_i, e_j, q, e_i1, e_m, False),
        roles(q, e_i1, e_m, p, e_i, e_j, True),
    ]


def _dyadic(n: int) -> Fraction:
    return Fraction(1, 2 ** n)


def _parameter_candidates(roles: _Roles, w: Rat2, psi_arc: Tuple[Rat2, Rat2], settings: PerturbSettings) -> Iterator[dict]:
    """Yields (gamma, tau, sigma) choices passing the exact pre-checks, before lambda."""
    a, b, c, d = roles.a, roles.b, roles.c, roles.d
    cross_ad = cross(a, d)
    cross_wb = cross(w, b)
    if cross_ad == 0 or cross_wb == 0:
        return
    start, end = psi_arc
    for g in range(1, settings.gamma_halvings + 1):
        gamma = _dyadic(g)
        s1 = scale(c, gamma)
        delta0 = gamma * cross(a, c) / cross_ad
        if delta0 <= 0:
            continue
        s = scale(d, delta0)
        t = sub(s, s1)
        kappa = dot(t, a) / dot(a, a)
        if not 0 < kappa < 1 or cross(t, a) != 0:
            continue
        for m_tau in range(1, settings.tau_steps + 1):
            tau = 1 - _dyadic(m_tau + 1)
            t2 = scale(t, tau)
            for m_sigma in range(1, settings.sigma_exponents + 1):
                sigma = 1 + _dyadic(m_sigma)
                if sigma * delta0 >= 1:
                    continue
                s2 = scale(s, sigma)
                beta = cross(w, sub(add(s1, t2), s2)) / cross_wb
                if not 0 < beta < 1:
                    continue
                t1 = scale(b, beta)
                psi_anchor = doubled(outer_normal(sub(t2, t1)))
                psi_partner = doubled(outer_normal(sub(s2, s1)))
                # the partner's new edge normal lies between the anchor's old edge and the anchor's new edge
                if roles.swapped:
                    ordered = in_open_arc(start, end, psi_anchor) and in_open_arc(psi_anchor, end, psi_partner)
                else:
                    ordered = in_open_arc(start, end, psi_partner) and in_open_arc(psi_partner, end, psi_anchor)
                if not ordered:
                    continue
                yield dict(gamma=gamma, s=s, s1=s1, s2=s2, t=t, t1=t1, t2=t2, tau=tau, sigma=sigma)


def _cut_polygon(polygon: ConvexPolygon, anchor: Rat2, partner: Rat2, new_points) -> Optional[ConvexPolygon]:
    kept = [v for v in polygon.vertices if v not in (anchor, partner)]
    hull = convex_hull(kept + list(new_points))
    if len(hull.vertices) != polygon.k + 2 or any(v not in hull.vertices for v in new_points):
        return None
    return ConvexPolygon(vertices=hull.vertices)


def _check_cut(
    body: Optional[Body],
    polygon: ConvexPolygon,
    candidate: ConvexPolygon,
    cut: CutConstruction,
    old_count: int,
) -> Optional[str]:
    """Reason for rejecting ``candidate``, or None when every requirement holds."""
    if body is not None and not inner_containment(body, candidate):
        return "K not interior"
    if not all(v in polygon.vertices or point_in_convex(polygon.vertices, v) for v in candidate.vertices):
        return "not inside P"
    if parallel_edge_pairs(candidate):
        return "parallel edges"
    if has_long_edge(candidate)[0]:
        return "long edge"
    p1, p2, q1, q2 = cut.new_points()
    if not (are_opposite(candidate, p2, q1) and are_opposite(candidate, p1, q2)):
        return "new vertices not opposite"
    hedgehog = polygon_hedgehog(candidate)
    try:
        hull = hedgehog_hull(hedgehog)
    except InternalInvariantError as e:
        raise InvariantRegression(f"Cut produced an inconsistent hedgehog: {e}") from e
    y, z = cut.y, cut.z
    if y == z:
        return "y equals z"
    strong = {c.location for c in hedgehog.corners if c.kind == "strong"}
    if y not in strong or z not in strong:
        return "y or z not a strong corner"
    if y not in hull.hull.vertices or z not in hull.hull.vertices:
        return "y or z not a hull vertex"
    if cross(perp(cut.support_normal), sub(z, y)) != 0:
        return "z - y not parallel to S"
    if hull.vertex_count <= old_count:
        return "hull count did not increase"
    return None


def build_cut(
    polygon: ConvexPolygon,
    target: CutTarget,
    body: Optional[Body] = None,
    settings: Optional[PerturbSettings] = None,
) -> CutConstruction:
    """Parameters of a cut at ``target`` after which conv H has more vertices.

    Both role assignments of the opposite pair are tried; lambda is halved
    until the cut polygon still contains ``body`` and every combinatorial
    requirement holds. Raises SearchExhausted when no schedule succeeds.
    """
    settings = settings or load_settings(PerturbSettings, "perturb")
    hedgehog = polygon_hedgehog(polygon)
    old_count = hedgehog_hull(hedgehog).vertex_count
    corner = target.corner
    if corner.kind != "strong":
        raise PreconditionError(f"Cut target {corner.location} is a weak corner")
    fan = hedgehog.fan
    i, j = corner.between
    psi_arc = (doubled(fan.normals[i]), doubled(fan.normals[j]))
    w = perp(target.support_normal)
    attempts = 0

    for roles in _role_assignments(polygon, corner, hedgehog):
        for params in _parameter_candidates(roles, w, psi_arc, settings):
            for halving in range(settings.lambda_halvings + 1):
                lam = _dyadic(halving)
                cut = CutConstruction(
                    target=corner.location,
                    p=roles.anchor,
                    q=roles.partner,
                    edge_i=roles.near_anchor,
                    edge_i1=roles.near_partner,
                    edge_j=roles.other_anchor,
                    edge_m=roles.other_partner,
                    support_normal=target.support_normal,
                    alpha=_angle(target.support_normal),
                    s=params["s"],
                    s1=params["s1"],
                    s2=params["s2"],
                    t=params["t"],
                    t1=params["t1"],
                    t2=params["t2"],
                    tau=params["tau"],
                    sigma=params["sigma"],
                    lam=lam,
                    psi_p=_reduced_angle(outer_normal(sub(params["t2"], params["t1"]))),
                    psi_q=_reduced_angle(outer_normal(sub(params["s2"], params["s1"]))),
                    swapped=roles.swapped,
                )
                attempts += 1
                candidate = _cut_polygon(polygon, roles.anchor, roles.partner, cut.new_points())
                if candidate is None:
                    continue
                reason = _check_cut(body, polygon, candidate, cut, old_count)
                if reason is None:
                    logger.debug(
                        "Cut at %s accepted after %d attempts (lambda=%s, tau=%s, sigma=%s, swapped=%s)",
                        corner.location, attempts, lam, cut.tau, cut.sigma, roles.swapped,
                    )
                    return cut
                logger.debug("Cut at %s rejected at lambda=%s: %s", corner.location, lam, reason)
    raise SearchExhausted(f"No admissible cut at {corner.location} after {attempts} attempts")


def apply_cut(polygon: ConvexPolygon, cut: CutConstruction, old_count: Optional[int] = None) -> ConvexPolygon:
    """P_lambda: P with p, q replaced by the four new vertices; raises when the count does not grow."""
    result = _cut_polygon(polygon, cut.p, cut.q, cut.new_points())
    if result is None:
        raise InvariantRegression("Cut vertices are not vertices of the cut polygon")
    before = old_count if old_count is not None else hedgehog_hull(polygon_hedgehog(polygon)).vertex_count
    after = hedgehog_hull(polygon_hedgehog(result)).vertex_count
    if after <= before:
        raise InvariantRegression(f"Hull vertex count went from {before} to {after}")
    return result


class PerturbationEngine:
    """
    Drives the sandwich polygon through successive cuts.

    ``run`` records every polygon in ``trace`` and reports failures as a
    message; ``execute`` raises them.
    """

    def __init__(
        self,
        body: Body,
        eps,
        target: int,
        seed: int = 0,
        settings: Optional[PerturbSettings] = None,
        sandwich_settings: Optional[SandwichSettings] = None,
    ):
        self.body = body
        self.eps = to_fraction(eps)
        self.target = target
        self.seed = seed
        self.settings = settings or load_settings(PerturbSettings, "perturb")
        self.sandwich_settings = sandwich_settings or load_settings(SandwichSettings, "sandwich")
        self.trace = PerturbationTrace(epsilon=self.eps, target=target, seed=seed)

    def _check_preconditions(self) -> None:
        if self.eps <= 0:
            raise PreconditionError(f"eps must be positive, got {self.eps}")
        if self.target < 0:
            raise PreconditionError(f"Target count must be nonnegative, got {self.target}")
        if is_centrally_symmetric(self.body)[0]:
            raise CentrallySymmetric("K is centrally symmetric; its hedgehog is a single point")

    def _record(self, polygon: ConvexPolygon, count: int, cut: Optional[CutConstruction]) -> None:
        step = TraceStep(
            polygon=polygon,
            hull_count=count,
            cut=cut,
            inner_contained=inner_containment(self.body, polygon),
            outer_contained=outer_containment(
                self.body, polygon, self.eps, self.sandwich_settings.smooth_check_samples
            ),
        )
        if not (step.inner_contained and step.outer_contained):
            raise InvariantRegression(f"Step {len(self.trace.steps)} left the eps-sandwich")
        self.trace.steps.append(step)

    def _next_cut(self, polygon: ConvexPolygon) -> CutConstruction:
        targets = cut_targets(polygon, settings=self.settings)
        for target in targets:
            try:
                return build_cut(polygon, target, self.body, self.settings)
            except SearchExhausted as e:
                logger.debug("%s; trying the next hull vertex", e)
        raise SearchExhausted(f"No hull vertex of {len(targets)} admits a cut")

    def execute(self) -> ConvexPolygon:
        self._check_preconditions()
        polygon = sandwich_polygon(self.body, self.eps, self.seed, self.sandwich_settings)
        count = hedgehog_hull(polygon_hedgehog(polygon)).vertex_count
        self._record(polygon, count, None)
        logger.info("Sandwich polygon: %d vertices, %d hull vertices", polygon.k, count)

        while count <= self.target:
            if len(self.trace.steps) > self.settings.max_cuts:
                raise SearchExhausted(f"Gave up after {self.settings.max_cuts} cuts at count {count}")
            cut = self._next_cut(polygon)
            polygon = apply_cut(polygon, cut, count)
            new_count = hedgehog_hull(polygon_hedgehog(polygon)).vertex_count
            logger.info("Cut %d at %s: hull vertices %d -> %d", len(self.trace.steps), cut.target, count, new_count)
            count = new_count
            self._record(polygon, count, cut)
        return polygon

    def run(self) -> Tuple[PerturbationTrace, Optional[str]]:
        """Returns the trace and the first error encountered, if any."""
        try:
            self.execute()
        except InternalInvariantError as e:
            logger.error("Perturbation failed after %d steps: %s", len(self.trace.steps), e)
            return self.trace, f"{type(e).__name__}: {e}"
        return self.trace, None


def increase_hull_vertices(
    body: Body,
    eps,
    k: int,
    seed: int = 0,
    settings: Optional[PerturbSettings] = None,
) -> Tuple[ConvexPolygon, PerturbationTrace]:
    """A polygon Q with K in int Q, Q in int(K + eps B) and more than k hull vertices of H_Q."""
    engine = PerturbationEngine(body, eps, k, seed, settings)
    polygon = engine.execute()
    return polygon, engine.trace


def replay_trace(trace: PerturbationTrace) -> ConvexPolygon:
    """Re-applies every recorded cut and checks each polygon bit for bit."""
    if not trace.steps:
        raise PreconditionError("Empty trace")
    polygon = trace.steps[0].polygon
    for n, step in enumerate(trace.steps[1:], start=1):
        if step.cut is None:
            raise InternalInvariantError(f"Step {n} has no cut")
        polygon = apply_cut(polygon, step.cut)
        if polygon.vertices != step.polygon.vertices:
            raise InternalInvariantError(f"Replay diverged at step {n}")
    return polygon


def _within_sandwich(body: Body, smooth: Body, eps: Fraction, grid: int) -> bool:
    phi = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    h_k = support_values(body, phi)
    h_m = support_values(smooth, phi)
    return bool((h_k < h_m).all() and (h_m < h_k + float(eps)).all())


def finalize_smooth(
    polygon: ConvexPolygon,
    body: Body,
    eps,
    settings: Optional[SmoothingSettings] = None,
) -> Tuple[SmoothBody, SmoothingCertificate]:
    """Arc-smooths Q with doubling radius until M stays in the sandwich and keeps the hull count."""
    settings = settings or load_settings(SmoothingSettings, "smoothing")
    eps = to_fraction(eps)
    polygon_count = hedgehog_hull(polygon_hedgehog(polygon)).vertex_count
    radius = settings.initial_radius_factor * diameter(polygon)
    history: List[Tuple[float, float]] = []
    for attempt in range(settings.doublings):
        try:
            smooth = smooth_by_arcs(polygon, radius)
        except RadiusTooSmall as e:
            logger.debug("Radius %.6g rejected: %s", radius, e)
            radius *= 2.0
            continue
        delta = support_distance(smooth, polygon, settings.support_grid)
        history.append((radius, delta))
        contained = _within_sandwich(body, smooth, eps, settings.support_grid)
        summary = smooth_hull_summary(
            smooth_hedgehog(smooth, settings.samples, settings.refine), settings.cluster_gap
        )
        logger.debug(
            "Radius %.6g: delta=%.3g, contained=%s, smooth count=%d (polygon %d)",
            radius, delta, contained, summary.vertex_count, polygon_count,
        )
        if contained and summary.vertex_count == polygon_count:
            rounding = smooth.arcs[1].radius
            logger.info("Smoothed with R=%.6g after %d attempts", radius, attempt + 1)
            certificate = SmoothingCertificate(
                radius=radius,
                rounding=rounding,
                polygon_count=polygon_count,
                smooth_count=summary.vertex_count,
                distance_history=history,
                body=smooth,
            )
            return smooth, certificate
        radius *= 2.0
    raise RadiusScheduleExhausted(f"No radius up to {radius:.6g} preserved the hull count {polygon_count}")
