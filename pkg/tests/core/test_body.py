import math
import random
from fractions import Fraction

import numpy as np
import pytest

from core.body import (
    check_no_parallel_edges,
    diameter,
    edge_normal_fan,
    has_long_edge,
    inner_containment,
    is_centrally_symmetric,
    make_arcgon,
    make_fourier,
    make_polygon,
    opposite_vertex_pairs,
    outer_containment,
    parallel_edge_pairs,
    random_polygon,
    sandwich_polygon,
    smooth_by_arcs,
    support,
    support_distance,
    support_values,
    translate,
)
from core.config_manager import SandwichSettings
from core.errors import ApproximationFailure, NonConvexInput, ParallelEdges, PreconditionError, RadiusTooSmall
from core.kernel import rat2


class TestMakePolygon:

    def test_clockwise_input_is_reversed(self):
        polygon = make_polygon([(0, 0), (0, 4), (4, 0)])
        assert polygon.vertices == (rat2(4, 0), rat2(0, 4), rat2(0, 0))

    def test_rejects_non_convex(self):
        with pytest.raises(NonConvexInput):
            make_polygon([(0, 0), (4, 0), (1, 1), (0, 4)])

    def test_rejects_collinear_vertex(self):
        with pytest.raises(NonConvexInput):
            make_polygon([(0, 0), (2, 0), (4, 0), (0, 4)])

    def test_rejects_duplicates_and_short_cycles(self):
        with pytest.raises(NonConvexInput):
            make_polygon([(0, 0), (1, 0), (1, 0), (0, 1)])
        with pytest.raises(NonConvexInput):
            make_polygon([(0, 0), (1, 0)])

    def test_translate_is_exact(self, triangle):
        moved = translate(triangle, rat2("1/3", -1))
        assert moved.vertices[1] == rat2(Fraction(13, 3), -1)


class TestEdgeStructure:

    def test_square_has_parallel_edges(self, square):
        assert parallel_edge_pairs(square) == [(0, 2), (1, 3)]
        with pytest.raises(ParallelEdges):
            check_no_parallel_edges(square)
        with pytest.raises(ParallelEdges):
            edge_normal_fan(square)

    def test_fan_is_sorted_and_covers_every_edge(self, octagon):
        fan = edge_normal_fan(octagon)
        assert fan.k == 8
        assert sorted(fan.edge_of) == list(range(8))
        assert all(a < b for a, b in zip(fan.angles, fan.angles[1:]))
        assert all(-math.pi / 2 < a < math.pi / 2 for a in fan.angles)

    def test_fan_rotates_away_from_horizontal_edges(self, triangle):
        fan = edge_normal_fan(triangle)
        assert fan.rotation_steps >= 1
        assert fan.k == 3

    def test_triangle_opposite_pairs(self, triangle):
        pairs = {frozenset((p.p, p.q)) for p in opposite_vertex_pairs(triangle)}
        assert pairs == {frozenset((0, 1)), frozenset((1, 2)), frozenset((0, 2))}

    def test_octagon_has_one_pair_per_vertex_count(self, octagon):
        pairs = {frozenset((p.p, p.q)) for p in opposite_vertex_pairs(octagon)}
        assert len(pairs) == octagon.k

    def test_every_triangle_edge_is_long(self, triangle):
        long_edge, witness = has_long_edge(triangle)
        assert long_edge
        assert witness is not None

    def test_diameter(self, triangle):
        assert diameter(triangle) == pytest.approx(4 * math.sqrt(2))


class TestSupport:

    def test_polygon_support_and_faces(self, triangle):
        result = support(triangle, rat2(1, 0))
        assert result.value == 4
        assert result.face.degenerate and result.face.a == rat2(4, 0)
        bottom = support(triangle, rat2(0, -1))
        assert bottom.value == 0
        assert set(bottom.face.endpoints) == {rat2(0, 0), rat2(4, 0)}

    def test_zero_direction_raises(self, triangle):
        with pytest.raises(PreconditionError):
            support(triangle, rat2(0, 0))

    def test_fourier_circle(self):
        circle = make_fourier(2.0, [(1, 0.5, -1.0)])
        phi = np.linspace(0, 2 * math.pi, 50)
        expected = 2.0 + 0.5 * np.cos(phi) - np.sin(phi)
        assert np.allclose(support_values(circle, phi), expected, atol=1e-12)

    def test_fourier_convexity_check(self):
        make_fourier(1.0, [(3, 0.1, 0.0)])
        with pytest.raises(NonConvexInput):
            make_fourier(1.0, [(3, 0.2, 0.0)])

    def test_arcgon_circle(self):
        circle = make_arcgon([{"center": (1.0, 2.0), "radius": 3.0, "start": 0.0, "end": 2 * math.pi}])
        assert support_values(circle, np.array([0.0]))[0] == pytest.approx(4.0)

    def test_arcgon_gap_is_rejected(self):
        with pytest.raises(NonConvexInput):
            make_arcgon([
                {"center": (0.0, 0.0), "radius": 1.0, "start": 0.0, "end": 3.0},
                {"center": (0.0, 0.0), "radius": 1.0, "start": 3.1, "end": 2 * math.pi},
            ])


class TestSymmetry:

    def test_square_center(self, square):
        symmetric, center = is_centrally_symmetric(square)
        assert symmetric and center == rat2("1/2", "1/2")

    def test_triangle_is_not_symmetric(self, triangle):
        assert is_centrally_symmetric(triangle) == (False, None)

    def test_fourier_symmetry_ignores_translation(self):
        assert is_centrally_symmetric(make_fourier(1.0, [(1, 0.3, 0.2), (2, 0.1, 0.0)]))[0]
        assert not is_centrally_symmetric(make_fourier(1.0, [(3, 0.1, 0.0)]))[0]


class TestSandwich:

    def test_triangle_sandwich(self, triangle):
        polygon = sandwich_polygon(triangle, Fraction(1, 2), seed=7)
        assert polygon.k % 2 == 1
        assert not parallel_edge_pairs(polygon)
        assert not has_long_edge(polygon)[0]
        assert inner_containment(triangle, polygon)
        assert outer_containment(triangle, polygon, Fraction(1, 2))

    def test_sandwich_is_deterministic(self, octagon):
        assert sandwich_polygon(octagon, "0.25", seed=3) == sandwich_polygon(octagon, "0.25", seed=3)

    def test_smooth_body_sandwich(self):
        body = make_fourier(1.0, [(3, 0.1, 0.0)])
        polygon = sandwich_polygon(body, Fraction(1, 10), seed=1)
        assert inner_containment(body, polygon)
        assert outer_containment(body, polygon, Fraction(1, 10))

    def test_nonpositive_eps(self, triangle):
        with pytest.raises(PreconditionError):
            sandwich_polygon(triangle, 0)

    def test_failure_after_retries(self, triangle):
        settings = SandwichSettings(max_attempts=1)
        with pytest.raises(ApproximationFailure):
            sandwich_polygon(triangle, Fraction(1, 10 ** 6), settings=settings)


class TestSmoothing:

    def test_radius_too_small(self, triangle):
        with pytest.raises(RadiusTooSmall):
            smooth_by_arcs(triangle, 1.0)

    def test_arcs_stay_close(self, triangle):
        smooth = smooth_by_arcs(triangle, 100.0)
        assert len(smooth.arcs) == 6
        delta = support_distance(smooth, triangle)
        assert 0 < delta < 0.1

    def test_distance_shrinks_with_radius(self, octagon):
        deltas = [support_distance(smooth_by_arcs(octagon, r), octagon) for r in (50.0, 100.0, 200.0)]
        assert deltas[0] > deltas[1] > deltas[2]


class TestRandomPolygons:

    def test_random_polygon_properties(self):
        rng = random.Random(11)
        for n in (5, 9, 15):
            polygon = random_polygon(rng, n)
            assert polygon.k == n
            assert not parallel_edge_pairs(polygon)
