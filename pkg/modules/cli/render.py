"""SVG figures of bodies, hedgehogs and their hulls."""
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from jinja2 import Environment

from core.body import boundary_points
from core.config_manager import RenderSettings, get_template, load_settings
from core.hedgehog import hedgehog_hull, polygon_hedgehog, smooth_hedgehog, smooth_hull_summary
from core.kernel import Rat2, add, perp, scale, to_float_array
from core.models import Body, ConvexPolygon, CutConstruction, MiddleHedgehog, RenderSpec

logger = logging.getLogger(__name__)

SVG_TEMPLATE_KEY = "svg"

# titles and labels come from file names and must not break the XML
_SVG_ENV = Environment(autoescape=True)


class _Frame:
    """World-to-pixel map: bounding box plus margin, uniform scale, y pointing up."""

    def __init__(self, points: np.ndarray, spec: RenderSpec, settings: RenderSettings):
        lo, hi = points.min(axis=0), points.max(axis=0)
        span = np.maximum(hi - lo, 1e-12)
        pad = settings.margin * span
        self.lo = lo - pad
        extent = span + 2 * pad
        self.scale = min(spec.width / extent[0], spec.height / extent[1])
        self.height = spec.height
        self.fmt = f"%.{settings.precision}f"

    def xy(self, x: float, y: float) -> Tuple[str, str]:
        px = (x - self.lo[0]) * self.scale
        py = self.height - (y - self.lo[1]) * self.scale
        return self.fmt % px, self.fmt % py

    def points(self, pts) -> str:
        return " ".join(",".join(self.xy(float(p[0]), float(p[1]))) for p in pts)


def _body_outline(body: Body, settings: RenderSettings) -> np.ndarray:
    if isinstance(body, ConvexPolygon):
        return to_float_array(body.vertices)
    phi = np.linspace(0.0, 2.0 * math.pi, settings.smooth_samples, endpoint=False)
    return boundary_points(body, phi)


def _hedgehog_of(body: Body, settings: RenderSettings) -> MiddleHedgehog:
    if isinstance(body, ConvexPolygon):
        return polygon_hedgehog(body)
    return smooth_hedgehog(body, settings.smooth_samples)


def _hedgehog_curve(hedgehog: MiddleHedgehog) -> np.ndarray:
    if hedgehog.kind == "polygon":
        return to_float_array(c.location for c in hedgehog.corners)
    return hedgehog.points


def _hull_points(hedgehog: MiddleHedgehog) -> np.ndarray:
    if hedgehog.kind == "polygon":
        return to_float_array(hedgehog_hull(hedgehog).hull.vertices)
    pts = np.array(smooth_hull_summary(hedgehog).cluster_points, dtype=float)
    rel = pts - pts.mean(axis=0)
    return pts[np.argsort(np.arctan2(rel[:, 1], rel[:, 0]))]


def _circle(frame: _Frame, point, radius: float, filled: bool, label: str = "") -> Dict[str, Any]:
    cx, cy = frame.xy(float(point[0]), float(point[1]))
    return {
        "kind": "circle", "cx": cx, "cy": cy, "r": frame.fmt % radius, "filled": filled,
        "label": label, "label_x": frame.fmt % (float(cx) + radius + 2), "label_y": cy,
    }


def _segment(frame: _Frame, a, b) -> Dict[str, Any]:
    x1, y1 = frame.xy(float(a[0]), float(a[1]))
    x2, y2 = frame.xy(float(b[0]), float(b[1]))
    return {"kind": "line", "x1": x1, "y1": y1, "x2": x2, "y2": y2}


def _cut_shapes(frame: _Frame, cut: CutConstruction, reach: float) -> List[Dict[str, Any]]:
    p1, p2, q1, q2 = cut.new_points()
    shapes = [_segment(frame, p1, p2), _segment(frame, q1, q2)]
    w = perp(cut.support_normal)
    length = math.hypot(float(w.x), float(w.y))
    half = scale(w, reach / length) if length else Rat2(0, 0)
    shapes.append(_segment(frame, add(cut.target, half), add(cut.target, scale(half, -1))))
    return shapes


def render_svg(
    body: Body,
    spec: Optional[RenderSpec] = None,
    convexity_points: Sequence[Rat2] = (),
    cut: Optional[CutConstruction] = None,
    title: str = "",
    settings: Optional[RenderSettings] = None,
) -> str:
    """SVG text for ``body`` with the requested layers, in the order given."""
    settings = settings or load_settings(RenderSettings, "render")
    spec = spec or RenderSpec(width=settings.width, height=settings.height)
    outline = _body_outline(body, settings)
    frame = _Frame(outline, spec, settings)
    needs_hedgehog = {"hedgehog", "hull", "corners", "affine-diameters"} & set(spec.layers)
    hedgehog = _hedgehog_of(body, settings) if needs_hedgehog else None
    dot = settings.corner_radius

    layers = []
    for name in spec.layers:
        shapes: List[Dict[str, Any]] = []
        if name == "body":
            shapes.append({"kind": "polygon", "points": frame.points(outline)})
        elif name == "hedgehog":
            shapes.append({"kind": "polygon", "points": frame.points(_hedgehog_curve(hedgehog))})
        elif name == "hull":
            shapes.append({"kind": "polygon", "points": frame.points(_hull_points(hedgehog))})
        elif name == "corners" and hedgehog.kind == "polygon":
            # weak corners are drawn hollow
            for n, corner in enumerate(hedgehog.corners):
                shapes.append(_circle(frame, corner.location, dot, corner.kind == "strong", f"c{n}"))
        elif name == "convexity-points":
            shapes.extend(_circle(frame, z, dot * 1.5, True) for z in convexity_points)
        elif name == "affine-diameters" and hedgehog.kind == "polygon":
            shapes.extend(_segment(frame, *corner.opposite_pair) for corner in hedgehog.corners)
        elif name == "cut-overlay" and cut is not None:
            reach = float(np.ptp(outline, axis=0).max()) / 4.0
            shapes.extend(_cut_shapes(frame, cut, reach))
        layers.append({"name": name, "color": settings.colors.get(name, "black"), "shapes": shapes})

    source = get_template(SVG_TEMPLATE_KEY, "render")
    if source is None:
        raise FileNotFoundError("SVG template config/templates/render/svg.yaml is missing")
    svg = _SVG_ENV.from_string(source).render(
        width=spec.width,
        height=spec.height,
        stroke_width=spec.stroke_width,
        show_labels=spec.show_labels,
        title=title,
        layers=layers,
    )
    logger.debug("Rendered %d layers", len(layers))
    return svg
