from fractions import Fraction

import pytest

from core.body import has_long_edge, inner_containment, make_polygon, outer_containment, sandwich_polygon
from core.errors import CentrallySymmetric, InternalInvariantError, PreconditionError
from core.hedgehog import hedgehog_hull, hull_vertex_count, polygon_hedgehog
from core.kernel import cross, sub
from core.perturbation_engine import (
    PerturbationEngine,
    apply_cut,
    build_cut,
    cut_targets,
    finalize_smooth,
    increase_hull_vertices,
    replay_trace,
    select_cut_target,
)

EPS = Fraction(1, 2)


@pytest.fixture(scope="module")
def triangle_run():
    triangle = make_polygon([(0, 0), (4, 0), (0, 4)])
    polygon, trace = increase_hull_vertices(triangle, EPS, 8, seed=0)
    return triangle, polygon, trace


@pytest.fixture(scope="module")
def triangle_run_20():
    triangle = make_polygon([(0, 0), (4, 0), (0, 4)])
    polygon, trace = increase_hull_vertices(triangle, EPS, 20, seed=0)
    return triangle, polygon, trace


class TestCutTargets:

    def test_targets_are_strong_hull_corners(self, triangle):
        polygon = sandwich_polygon(triangle, EPS, seed=0)
        hull = hedgehog_hull(polygon_hedgehog(polygon))
        targets = cut_targets(polygon)
        assert len(targets) == hull.vertex_count
        assert all(t.corner.kind == "strong" for t in targets)

    def test_support_normal_isolates_the_corner(self, triangle):
        polygon = sandwich_polygon(triangle, EPS, seed=0)
        hull = hedgehog_hull(polygon_hedgehog(polygon)).hull
        target = select_cut_target(polygon)
        x, n = target.corner.location, target.support_normal
        for v in hull.vertices:
            if v != x:
                assert n.x * (v.x - x.x) + n.y * (v.y - x.y) < 0

    def test_long_edge_is_rejected(self, triangle):
        assert has_long_edge(triangle)[0]
        with pytest.raises(PreconditionError):
            select_cut_target(triangle)


class TestSingleCut:

    def test_cut_raises_the_count(self, triangle):
        polygon = sandwich_polygon(triangle, EPS, seed=0)
        before = hull_vertex_count(polygon)
        cut = build_cut(polygon, select_cut_target(polygon), triangle)
        after = apply_cut(polygon, cut, before)
        assert hull_vertex_count(after) > before
        assert after.k == polygon.k + 2
        assert set(cut.new_points()) <= set(after.vertices)

    def test_new_hull_vertices_span_a_parallel_segment(self, triangle):
        polygon = sandwich_polygon(triangle, EPS, seed=0)
        target = select_cut_target(polygon)
        cut = build_cut(polygon, target, triangle)
        after = apply_cut(polygon, cut)
        hull = hedgehog_hull(polygon_hedgehog(after))
        assert cut.y in hull.hull.vertices and cut.z in hull.hull.vertices
        normal = cut.support_normal
        direction = sub(cut.z, cut.y)
        assert direction.x * normal.x + direction.y * normal.y == 0
        assert cross(direction, normal) != 0

    def test_parameters_stay_in_range(self, triangle):
        polygon = sandwich_polygon(triangle, EPS, seed=0)
        cut = build_cut(polygon, select_cut_target(polygon), triangle)
        assert 0 < cut.lam <= 1
        assert Fraction(1, 2) < cut.tau < 1
        assert cut.sigma > 1


class TestEngine:

    def test_counts_strictly_increase(self, triangle_run):
        _, polygon, trace = triangle_run
        counts = trace.counts
        assert all(a < b for a, b in zip(counts, counts[1:]))
        assert counts[-1] > 8
        assert trace.final == polygon

    def test_every_step_stays_in_the_sandwich(self, triangle_run):
        triangle, _, trace = triangle_run
        for step in trace.steps:
            assert step.inner_contained and step.outer_contained
            assert inner_containment(triangle, step.polygon)
            assert outer_containment(triangle, step.polygon, EPS)

    def test_first_step_has_no_cut(self, triangle_run):
        _, _, trace = triangle_run
        assert trace.steps[0].cut is None
        assert all(step.cut is not None for step in trace.steps[1:])

    def test_replay_reproduces_the_trace(self, triangle_run):
        _, polygon, trace = triangle_run
        assert replay_trace(trace) == polygon

    def test_replay_detects_divergence(self, triangle_run):
        _, _, trace = triangle_run
        if len(trace.steps) < 3:
            pytest.skip("needs two cuts")
        tampered = trace.model_copy(update={"steps": [trace.steps[0], trace.steps[2]]})
        with pytest.raises(InternalInvariantError):
            replay_trace(tampered)

    def test_low_target_needs_no_cut(self, octagon):
        engine = PerturbationEngine(octagon, Fraction(1, 4), 1, seed=0)
        trace, error = engine.run()
        assert error is None
        assert len(trace.steps) == 1

    def test_runs_are_deterministic(self, octagon):
        first, _ = PerturbationEngine(octagon, Fraction(1, 4), 1, seed=5).run()
        second, _ = PerturbationEngine(octagon, Fraction(1, 4), 1, seed=5).run()
        assert first.final == second.final

    def test_symmetric_body_is_rejected(self, square):
        with pytest.raises(CentrallySymmetric):
            PerturbationEngine(square, EPS, 5).execute()

    def test_eps_must_be_positive(self, triangle):
        with pytest.raises(PreconditionError):
            PerturbationEngine(triangle, 0, 5).execute()

    def test_replay_of_empty_trace(self, triangle):
        engine = PerturbationEngine(triangle, EPS, 5)
        with pytest.raises(PreconditionError):
            replay_trace(engine.trace)


class TestSmoothing:

    def test_smoothing_keeps_the_count(self, triangle_run):
        triangle, polygon, _ = triangle_run
        smooth, certificate = finalize_smooth(polygon, triangle, EPS)
        assert certificate.smooth_count == certificate.polygon_count == hull_vertex_count(polygon)
        assert certificate.body == smooth
        assert certificate.distance_history
        radii = [r for r, _ in certificate.distance_history]
        assert all(a < b for a, b in zip(radii, radii[1:]))

    def test_smoothing_of_a_twenty_vertex_hull(self, triangle_run_20):
        triangle, polygon, _ = triangle_run_20
        smooth, certificate = finalize_smooth(polygon, triangle, EPS)
        assert certificate.smooth_count == certificate.polygon_count == hull_vertex_count(polygon)
        deltas = [delta for _, delta in certificate.distance_history]
        assert all(a > b for a, b in zip(deltas, deltas[1:]))
        assert certificate.body == smooth


class TestTwentyHullVertices:

    def test_count_reaches_the_target(self, triangle_run_20):
        _, polygon, trace = triangle_run_20
        counts = trace.counts
        assert all(a < b for a, b in zip(counts, counts[1:]))
        assert counts[-1] >= 20
        assert hull_vertex_count(polygon) == counts[-1]

    def test_every_step_stays_in_the_sandwich(self, triangle_run_20):
        triangle, _, trace = triangle_run_20
        for step in trace.steps:
            assert inner_containment(triangle, step.polygon)
            assert outer_containment(triangle, step.polygon, EPS)
