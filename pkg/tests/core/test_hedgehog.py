import math

import numpy as np
import pytest

import core.hedgehog as hedgehog_module
from core.body import make_arcgon, make_fourier, make_polygon, smooth_by_arcs, diameter
from core.config_manager import SamplingSettings
from core.errors import PreconditionError
from core.hedgehog import (
    hedgehog_distance,
    hedgehog_hull,
    hull_vertex_count,
    middle_line,
    middle_line_intersection,
    middle_point,
    middle_set,
    midline_intercept,
    polygon_hedgehog,
    position_at_corner,
    smooth_hedgehog,
    smooth_hull_summary,
)
from core.kernel import hausdorff_distance, rat2


class TestPolygonHedgehog:

    def test_octagon_corner_classification(self, octagon):
        hedgehog = polygon_hedgehog(octagon)
        assert len(hedgehog.corners) == 8
        assert hedgehog.weak_count == 1
        assert hedgehog.strong_count == 7
        assert hedgehog_hull(hedgehog).vertex_count == 5

    def test_octagon_hull_vertices_are_strong(self, octagon):
        hull = hedgehog_hull(polygon_hedgehog(octagon))
        assert all(corner.kind == "strong" for corner in hull.hull_corners)
        assert [c.location for c in hull.hull_corners] == list(hull.hull.vertices)

    def test_triangle_is_the_medial_triangle(self, triangle):
        hedgehog = polygon_hedgehog(triangle)
        locations = {c.location for c in hedgehog.corners}
        assert locations == {rat2(2, 0), rat2(0, 2), rat2(2, 2)}
        assert all(c.kind == "strong" for c in hedgehog.corners)
        assert hull_vertex_count(triangle) == 3

    def test_middle_sets_chain_the_corners(self, octagon):
        hedgehog = polygon_hedgehog(octagon)
        for i, ms in enumerate(hedgehog.middle_sets):
            assert ms.geometry.a == hedgehog.corners[i - 1].location
            assert ms.geometry.b == hedgehog.corners[i].location

    def test_corner_is_midpoint_of_its_pair(self, octagon):
        for corner in polygon_hedgehog(octagon).corners:
            p, q = corner.opposite_pair
            assert corner.location == rat2((p.x + q.x) / 2, (p.y + q.y) / 2)

    def test_middle_set_of_edge_direction(self, triangle):
        # faces in direction -e_2: bottom edge; in e_2: apex (0, 4)
        ms = middle_set(triangle, rat2(0, -1))
        assert set(ms.geometry.endpoints) == {rat2(0, 2), rat2(2, 2)}

    def test_middle_line_offset(self, triangle):
        line = middle_line(triangle, rat2(1, 0))
        assert line.contains(rat2(2, 7))


class TestSmoothHedgehog:

    def test_circle_hedgehog_is_its_center(self):
        circle = make_fourier(2.0, [(1, 0.5, -1.0)])
        points = smooth_hedgehog(circle, 256).points
        assert np.abs(points - np.array([0.5, -1.0])).max() < 1e-12

    def test_fourier_closed_form(self):
        body = make_fourier(1.0, [(3, 0.1, 0.0)])
        hedgehog = smooth_hedgehog(body, 512)
        phi = hedgehog.angles
        u = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        du = np.stack([-np.sin(phi), np.cos(phi)], axis=-1)
        expected = 0.1 * np.cos(3 * phi)[:, None] * u - 0.3 * np.sin(3 * phi)[:, None] * du
        assert np.abs(hedgehog.points - expected).max() < 1e-12

    def test_intercept_derivative_matches_formula(self):
        body = make_fourier(1.0, [(3, 0.1, 0.0), (2, 0.05, 0.02)])
        for phi in np.linspace(-1.2, 1.2, 100):
            diag = midline_intercept(body, float(phi), step=1e-4)
            assert diag.derivative_fd == pytest.approx(diag.derivative_formula, abs=1e-6)

    def test_intercept_rejects_vertical_lines(self):
        with pytest.raises(PreconditionError):
            midline_intercept(make_fourier(1.0, []), math.pi / 2)

    def test_envelope_property(self):
        body = make_fourier(1.0, [(3, 0.1, 0.0)])
        x = np.array(middle_point(body, 0.3))
        y = np.array(middle_line_intersection(body, 0.3, 1e-5))
        assert np.abs(x - y).max() < 1e-4

    def test_envelope_error_shrinks_with_the_step(self):
        body = make_fourier(1.0, [(3, 0.1, 0.0), (2, 0.05, 0.02)])
        x = np.array(middle_point(body, 0.3))
        errors = [np.hypot(*(np.array(middle_line_intersection(body, 0.3, step)) - x)) for step in (1e-2, 1e-3, 1e-4)]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 1e-3

    def test_three_cusped_hull(self):
        body = make_fourier(1.0, [(3, 0.1, 0.0)])
        summary = smooth_hull_summary(smooth_hedgehog(body, 4096, refine=3))
        assert summary.vertex_count == 3

    def test_symmetric_body_is_degenerate(self):
        ellipse_like = make_fourier(1.0, [(2, 0.1, 0.0)])
        summary = smooth_hull_summary(smooth_hedgehog(ellipse_like, 1024))
        assert summary.degenerate and summary.vertex_count == 1

    def test_too_few_samples(self):
        with pytest.raises(PreconditionError):
            smooth_hedgehog(make_fourier(1.0, []), 4)


class TestContinuity:

    def test_hedgehog_distance_shrinks(self, octagon):
        diam = diameter(octagon)
        distances = [
            hedgehog_distance(octagon, smooth_by_arcs(octagon, factor * diam), samples=4096, per_segment=512)
            for factor in (10, 40, 160, 640)
        ]
        assert all(a > b for a, b in zip(distances, distances[1:]))
        assert distances[-1] < 1e-3 * diam

    def test_distance_uses_the_configured_chunk(self, triangle, monkeypatch):
        seen = {}

        def spy(a, b, chunk_rows):
            seen["chunk_rows"] = chunk_rows
            return hausdorff_distance(a, b, chunk_rows=chunk_rows)

        monkeypatch.setattr(hedgehog_module, "load_settings", lambda model, key: SamplingSettings(hausdorff_chunk=3))
        monkeypatch.setattr(hedgehog_module, "hausdorff_distance", spy)
        smooth = smooth_by_arcs(triangle, 100.0)
        assert hedgehog_distance(triangle, smooth, samples=256, per_segment=16) > 0
        assert seen["chunk_rows"] == 3

    def test_arcgon_circle_hedgehog(self):
        circle = make_arcgon([{"center": (3.0, 1.0), "radius": 2.0, "start": 0.0, "end": 2 * math.pi}])
        assert np.abs(smooth_hedgehog(circle, 64).points - np.array([3.0, 1.0])).max() < 1e-12


class TestPositioning:

    def test_hull_vertex_moves_to_origin(self, triangle):
        # (-1, -3) supports the medial triangle only at (2, 0)
        moved = position_at_corner(triangle, rat2(2, 0), rat2(-1, -3))
        hull = hedgehog_hull(polygon_hedgehog(moved))
        assert rat2(0, 0) in hull.hull.vertices
        assert all(v.y > 0 for v in hull.hull.vertices if v != rat2(0, 0))

    def test_similarity_keeps_classification(self, octagon):
        hull = hedgehog_hull(polygon_hedgehog(octagon))
        corner = hull.hull_corners[0].location
        moved = position_at_corner(octagon, corner, rat2(0, -1))
        assert hull_vertex_count(moved) == 5
        assert make_polygon(moved.vertices) == moved
