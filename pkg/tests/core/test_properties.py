import random

from hypothesis import given, settings
from hypothesis import strategies as st

from core.body import random_polygon, translate
from core.convexity import first_independent_triple, is_convexity_point, reflect
from core.hedgehog import hedgehog_hull, middle_set, polygon_hedgehog
from core.kernel import add, neg, rat2

seeds = st.integers(min_value=0, max_value=2 ** 32)
sizes = st.integers(min_value=3, max_value=9)
shifts = st.builds(rat2, st.fractions(min_value=-100, max_value=100, max_denominator=7),
                   st.fractions(min_value=-100, max_value=100, max_denominator=7))
directions = st.builds(rat2, st.integers(-50, 50), st.integers(-50, 50)).filter(lambda u: u != rat2(0, 0))


def _check(polygon):
    hedgehog = polygon_hedgehog(polygon)
    hull = hedgehog_hull(hedgehog)
    weak = {c.location for c in hedgehog.corners if c.kind == "weak"}
    assert not weak & set(hull.hull.vertices)
    assert all(is_convexity_point(polygon, v) for v in hull.hull.vertices)
    assert first_independent_triple(list(hull.hull.vertices)) is not None
    return hull.vertex_count


class TestRandomPolygons:

    def test_thousand_seeded_polygons(self):
        rng = random.Random(20240501)
        counts = [_check(random_polygon(rng, rng.randint(5, 15))) for _ in range(1000)]
        assert min(counts) >= 3

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.integers(min_value=3, max_value=12))
    def test_hull_vertices_are_convexity_points(self, seed, n):
        _check(random_polygon(random.Random(seed), n))


class TestTranslation:

    @settings(max_examples=30, deadline=None)
    @given(seeds, sizes, shifts)
    def test_convexity_test_moves_with_the_body(self, seed, n, shift):
        polygon = random_polygon(random.Random(seed), n)
        moved = translate(polygon, shift)
        corners = [c.location for c in polygon_hedgehog(polygon).corners]
        centroid = rat2(sum(v.x for v in polygon.vertices) / n, sum(v.y for v in polygon.vertices) / n)
        for z in corners + [centroid]:
            assert is_convexity_point(moved, add(z, shift)) == is_convexity_point(polygon, z)

    @settings(max_examples=30, deadline=None)
    @given(seeds, sizes, shifts)
    def test_hedgehog_moves_with_the_body(self, seed, n, shift):
        polygon = random_polygon(random.Random(seed), n)
        before = polygon_hedgehog(polygon)
        after = polygon_hedgehog(translate(polygon, shift))
        assert [c.location for c in after.corners] == [add(c.location, shift) for c in before.corners]
        assert [c.kind for c in after.corners] == [c.kind for c in before.corners]


class TestSymmetries:

    @settings(max_examples=50, deadline=None)
    @given(seeds, sizes, shifts)
    def test_reflection_is_an_involution(self, seed, n, z):
        polygon = random_polygon(random.Random(seed), n)
        assert reflect(reflect(polygon, z), z) == polygon

    @settings(max_examples=30, deadline=None)
    @given(seeds, sizes)
    def test_convexity_test_agrees_on_the_reflection(self, seed, n):
        polygon = random_polygon(random.Random(seed), n)
        for corner in polygon_hedgehog(polygon).corners:
            z = corner.location
            assert is_convexity_point(reflect(polygon, z), z) == is_convexity_point(polygon, z)

    @settings(max_examples=50, deadline=None)
    @given(seeds, sizes, directions)
    def test_middle_set_ignores_the_sign_of_u(self, seed, n, u):
        polygon = random_polygon(random.Random(seed), n)
        assert middle_set(polygon, u).geometry == middle_set(polygon, neg(u)).geometry
