import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest
from pydantic import ValidationError

from core.body import make_fourier, sandwich_polygon
from core.kernel import rat2
from core.models import RenderSpec
from core.perturbation_engine import build_cut, select_cut_target
from modules.cli.render import render_svg

SVG = "{http://www.w3.org/2000/svg}"


def _layers(svg_text):
    root = ET.fromstring(svg_text)
    return root, {g.get("id"): g for g in root.iter(f"{SVG}g")}


class TestRenderSvg:

    def test_default_layers(self, octagon):
        root, layers = _layers(render_svg(octagon, title="octagon"))
        assert root.get("width") == "800"
        assert list(layers) == ["body", "hedgehog", "hull", "corners"]
        assert root.find(f"{SVG}title").text == "octagon"

    def test_corner_markers(self, octagon):
        _, layers = _layers(render_svg(octagon))
        circles = layers["corners"].findall(f"{SVG}circle")
        assert len(circles) == 8
        hollow = [c for c in circles if c.get("fill") == "white"]
        assert len(hollow) == 1

    def test_hull_polygon_vertex_count(self, octagon):
        _, layers = _layers(render_svg(octagon))
        points = layers["hull"].find(f"{SVG}polygon").get("points").split()
        assert len(points) == 5

    def test_symmetric_body_without_hedgehog_layers(self, square):
        spec = RenderSpec(layers=["body", "convexity-points"])
        _, layers = _layers(render_svg(square, spec=spec, convexity_points=[rat2("1/2", "1/2")]))
        assert len(layers["convexity-points"].findall(f"{SVG}circle")) == 1

    def test_smooth_body(self):
        body = make_fourier(1.0, [(3, 0.1, 0.0)])
        _, layers = _layers(render_svg(body, spec=RenderSpec(layers=["body", "hedgehog", "hull"])))
        assert len(layers["hull"].find(f"{SVG}polygon").get("points").split()) == 3

    def test_labels(self, triangle):
        svg = render_svg(triangle, spec=RenderSpec(layers=["corners"], show_labels=True))
        assert ">c0</text>" in svg

    def test_cut_overlay(self, triangle):
        polygon = sandwich_polygon(triangle, Fraction(1, 2), seed=0)
        cut = build_cut(polygon, select_cut_target(polygon), triangle)
        _, layers = _layers(render_svg(polygon, spec=RenderSpec(layers=["cut-overlay"]), cut=cut))
        assert len(layers["cut-overlay"].findall(f"{SVG}line")) == 3

    def test_title_is_escaped(self, triangle):
        root, _ = _layers(render_svg(triangle, title="a & b <draft>"))
        assert root.find(f"{SVG}title").text == "a & b <draft>"

    def test_output_is_deterministic(self, octagon):
        assert render_svg(octagon) == render_svg(octagon)

    def test_unknown_layer(self):
        with pytest.raises(ValidationError):
            RenderSpec(layers=["body", "shadow"])
