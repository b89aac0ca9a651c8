"""Body files, reports and traces as structured text (JSON) with exact "p/q" rationals."""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Union

from pydantic import ValidationError

from .body import make_arcgon, make_fourier, make_polygon
from .errors import BodyFileError, NonConvexInput
from .kernel import Rat2
from .models import (
    Body,
    ConvexityReport,
    ConvexPolygon,
    CutConstruction,
    OracleComparison,
    PerturbationTrace,
    SmoothBody,
    SmoothingCertificate,
    TraceStep,
)

logger = logging.getLogger(__name__)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def parse_rational(value: Any) -> Fraction:
    """Accepts "p/q", decimal text and JSON numbers; floats are read from their decimal text."""
    if isinstance(value, bool):
        raise BodyFileError(f"Not a number: {value!r}")
    try:
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, (float, str)):
            return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise BodyFileError(f"Not a rational: {value!r}") from e
    raise BodyFileError(f"Not a number: {value!r}")


def _point(value: Any) -> Rat2:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise BodyFileError(f"Expected a coordinate pair, got {value!r}")
    return Rat2(parse_rational(value[0]), parse_rational(value[1]))


def point_to_json(point: Rat2) -> List[str]:
    return [format_rational(point.x), format_rational(point.y)]


def _float(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise BodyFileError(f"Expected a number, got {value!r}")
    try:
        return float(Fraction(str(value)))
    except (ValueError, ZeroDivisionError) as e:
        raise BodyFileError(f"Expected a number, got {value!r}") from e


def body_from_dict(data: Dict[str, Any]) -> Body:
    if not isinstance(data, dict):
        raise BodyFileError("A body file holds a JSON object")
    kind = data.get("type")
    try:
        if kind == "polygon":
            vertices = data.get("vertices")
            if not isinstance(vertices, list):
                raise BodyFileError("'vertices' must be a list")
            return make_polygon(_point(v) for v in vertices)
        if kind == "arcgon":
            arcs = data.get("arcs")
            if not isinstance(arcs, list):
                raise BodyFileError("'arcs' must be a list")
            return make_arcgon(
                {
                    "center": tuple(_float(c) for c in arc["center"]),
                    "radius": _float(arc["radius"]),
                    "start": _float(arc["from"]),
                    "end": _float(arc["to"]),
                }
                for arc in arcs
            )
        if kind == "fourier":
            terms = data.get("terms", [])
            parsed = [(int(t[0]), _float(t[1]), _float(t[2])) for t in terms]
            return make_fourier(_float(data["a0"]), parsed)
    except (KeyError, TypeError, IndexError) as e:
        raise BodyFileError(f"Malformed {kind} body: {e}") from e
    except ValidationError as e:
        raise BodyFileError(f"Invalid {kind} body: {e.errors()[0]['msg']}") from e
    except NonConvexInput as e:
        raise BodyFileError(f"Not a convex {kind}: {e}") from e
    raise BodyFileError(f"Unknown body type {kind!r}")


def body_to_dict(body: Body) -> Dict[str, Any]:
    if isinstance(body, ConvexPolygon):
        return {"type": "polygon", "vertices": [point_to_json(v) for v in body.vertices]}
    if body.kind == "fourier":
        return {"type": "fourier", "a0": body.a0, "terms": [[t.j, t.a, t.b] for t in body.terms]}
    return {
        "type": "arcgon",
        "arcs": [
            {"center": list(a.center), "radius": a.radius, "from": a.start, "to": a.end}
            for a in body.arcs
        ],
    }


def load_body(path: Union[str, Path]) -> Body:
    """Parses a body file; every failure, a non-convex vertex cycle included, surfaces as BodyFileError."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise BodyFileError(f"Cannot read {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise BodyFileError(f"{path}: {e}") from e
    body = body_from_dict(data)
    logger.debug("Loaded %s body from %s", "polygon" if isinstance(body, ConvexPolygon) else body.kind, path)
    return body


def dump_body(body: Body, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(body_to_dict(body), indent=2) + "\n", encoding="utf-8")


def report_to_dict(report: ConvexityReport) -> Dict[str, Any]:
    return {
        "body": report.body_id,
        "symmetric": report.symmetric,
        "center": point_to_json(report.center) if report.center is not None else None,
        "candidates": [
            {
                "point": point_to_json(c.point),
                "corner": c.corner.kind if c.corner else None,
                "verified": c.verified,
            }
            for c in report.candidates
        ],
        "triple": [point_to_json(p) for p in report.affine_independent_triple]
        if report.affine_independent_triple
        else None,
        "oracle": oracle_to_dict(report.oracle) if report.oracle is not None else None,
    }


def oracle_to_dict(comparison: OracleComparison) -> Dict[str, Any]:
    return {
        "grid": comparison.grid,
        "cell": [format_rational(c) for c in comparison.cell],
        "hits": [point_to_json(p) for p in comparison.hits],
        "matched": len(comparison.matched),
        "unmatched": len(comparison.unmatched),
        "extra": [point_to_json(p) for p in comparison.extra],
        "consistent": comparison.consistent,
    }


_CUT_VECTORS = ("target", "p", "q", "support_normal", "s", "s1", "s2", "t", "t1", "t2")
_CUT_EDGES = ("edge_i", "edge_i1", "edge_j", "edge_m")
_CUT_SCALARS = ("tau", "sigma", "lam")


def cut_to_dict(cut: CutConstruction) -> Dict[str, Any]:
    data: Dict[str, Any] = {name: point_to_json(getattr(cut, name)) for name in _CUT_VECTORS}
    data.update({name: [point_to_json(v) for v in getattr(cut, name)] for name in _CUT_EDGES})
    data.update({name: format_rational(getattr(cut, name)) for name in _CUT_SCALARS})
    data.update(alpha=cut.alpha, psi_p=cut.psi_p, psi_q=cut.psi_q, swapped=cut.swapped)
    return data


def cut_from_dict(data: Dict[str, Any]) -> CutConstruction:
    fields: Dict[str, Any] = {name: _point(data[name]) for name in _CUT_VECTORS}
    fields.update({name: tuple(_point(v) for v in data[name]) for name in _CUT_EDGES})
    fields.update({name: parse_rational(data[name]) for name in _CUT_SCALARS})
    fields.update(alpha=data["alpha"], psi_p=data["psi_p"], psi_q=data["psi_q"], swapped=data["swapped"])
    return CutConstruction(**fields)


def trace_to_dict(trace: PerturbationTrace) -> Dict[str, Any]:
    return {
        "epsilon": format_rational(trace.epsilon),
        "target": trace.target,
        "seed": trace.seed,
        "steps": [
            {
                "polygon": [point_to_json(v) for v in step.polygon.vertices],
                "hull_count": step.hull_count,
                "inner_contained": step.inner_contained,
                "outer_contained": step.outer_contained,
                "cut": cut_to_dict(step.cut) if step.cut else None,
            }
            for step in trace.steps
        ],
    }


def trace_from_dict(data: Dict[str, Any]) -> PerturbationTrace:
    try:
        steps = [
            TraceStep(
                polygon=ConvexPolygon(vertices=tuple(_point(v) for v in step["polygon"])),
                hull_count=step["hull_count"],
                inner_contained=step["inner_contained"],
                outer_contained=step["outer_contained"],
                cut=cut_from_dict(step["cut"]) if step.get("cut") else None,
            )
            for step in data["steps"]
        ]
        return PerturbationTrace(
            epsilon=parse_rational(data["epsilon"]), target=data["target"], seed=data["seed"], steps=steps
        )
    except (KeyError, TypeError) as e:
        raise BodyFileError(f"Malformed trace: {e}") from e


def certificate_to_dict(certificate: SmoothingCertificate) -> Dict[str, Any]:
    return {
        "radius": certificate.radius,
        "rounding": certificate.rounding,
        "polygon_count": certificate.polygon_count,
        "smooth_count": certificate.smooth_count,
        "distance_history": [list(pair) for pair in certificate.distance_history],
        "body": body_to_dict(certificate.body),
    }


def dumps(data: Dict[str, Any]) -> str:
    """Deterministic JSON text."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def smooth_body_summary(body: SmoothBody) -> str:
    if body.kind == "fourier":
        return f"fourier body with {len(body.terms)} terms"
    return f"arcgon with {len(body.arcs)} arcs"
