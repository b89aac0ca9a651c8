import json
from fractions import Fraction

import pytest

from core.body import make_polygon
from core.errors import BodyFileError, NonConvexInput
from core.kernel import rat2
from core.models import SmoothBody
from core.perturbation_engine import increase_hull_vertices, replay_trace
from core.serialization import (
    body_to_dict,
    dump_body,
    dumps,
    format_rational,
    load_body,
    parse_rational,
    trace_from_dict,
    trace_to_dict,
)


class TestRationals:

    def test_format(self):
        assert format_rational(Fraction(6, 4)) == "3/2"
        assert format_rational(Fraction(-5)) == "-5"

    def test_parse_forms(self):
        assert parse_rational("3/2") == Fraction(3, 2)
        assert parse_rational("0.1") == Fraction(1, 10)
        assert parse_rational(0.1) == Fraction(1, 10)
        assert parse_rational(7) == 7

    @pytest.mark.parametrize("bad", ["x", "1/0", True, None, [1]])
    def test_parse_rejects(self, bad):
        with pytest.raises(BodyFileError):
            parse_rational(bad)


class TestBodyFiles:

    def test_polygon_is_exact(self, polygon_file):
        polygon = load_body(polygon_file("octagon"))
        assert polygon.vertices[0] == rat2("6.8", "0.5")

    def test_polygon_round_trip(self, octagon, tmp_path):
        path = tmp_path / "octagon.json"
        dump_body(octagon, path)
        assert load_body(path) == octagon

    def test_fourier_body(self, body_file):
        body = load_body(body_file("f", {"type": "fourier", "a0": 1, "terms": [[3, 0.1, 0]]}))
        assert isinstance(body, SmoothBody) and body.kind == "fourier"
        assert body_to_dict(body)["terms"] == [[3, 0.1, 0.0]]

    def test_arcgon_body(self, body_file):
        arcs = [{"center": [0, 0], "radius": 1, "from": 0, "to": 6.283185307179586}]
        body = load_body(body_file("a", {"type": "arcgon", "arcs": arcs}))
        assert body.kind == "arcgon" and len(body.arcs) == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(BodyFileError):
            load_body(tmp_path / "absent.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(BodyFileError):
            load_body(path)

    @pytest.mark.parametrize("data", [
        [],
        {"type": "disc"},
        {"type": "polygon"},
        {"type": "polygon", "vertices": [[0, 0], [1]]},
        {"type": "fourier", "terms": []},
        {"type": "arcgon", "arcs": [{"center": [0, 0]}]},
    ])
    def test_malformed_bodies(self, body_file, data):
        with pytest.raises(BodyFileError):
            load_body(body_file("m", data))

    def test_non_convex_polygon_is_a_file_error(self, body_file):
        path = body_file("nc", {"type": "polygon", "vertices": [[0, 0], [4, 0], [1, 1], [0, 4]]})
        with pytest.raises(BodyFileError) as excinfo:
            load_body(path)
        assert isinstance(excinfo.value.__cause__, NonConvexInput)


class TestTraces:

    def test_trace_survives_a_round_trip(self, triangle):
        _, trace = increase_hull_vertices(triangle, Fraction(1, 2), 4, seed=1)
        text = dumps(trace_to_dict(trace))
        restored = trace_from_dict(json.loads(text))
        assert restored.counts == trace.counts
        assert [s.polygon for s in restored.steps] == [s.polygon for s in trace.steps]
        assert replay_trace(restored) == trace.final

    def test_malformed_trace(self):
        with pytest.raises(BodyFileError):
            trace_from_dict({"epsilon": "1/2"})

    def test_dumps_is_stable(self):
        assert dumps({"b": 1, "a": [make_polygon([(0, 0), (1, 0), (0, 1)]).k]}) == '{\n  "a": [\n    3\n  ],\n  "b": 1\n}\n'
