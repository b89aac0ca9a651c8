"""Command orchestration: load bodies, run analyses, render reports and files."""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from jinja2 import Template

from core.body import to_fraction
from core.config_manager import get_template
from core.convexity import (
    brute_force_convexity_points,
    candidate_convexity_points,
    compare_with_oracle,
    find_convexity_triple,
)
from core.errors import PreconditionError
from core.hedgehog import hedgehog_hull, polygon_hedgehog, smooth_hedgehog, smooth_hull_summary
from core.kernel import Rat2
from core.models import Body, ConvexPolygon, OracleComparison, RenderSpec
from core.perturbation_engine import PerturbationEngine, finalize_smooth
from core.serialization import (
    certificate_to_dict,
    dump_body,
    dumps,
    format_rational,
    load_body,
    oracle_to_dict,
    report_to_dict,
    smooth_body_summary,
    trace_from_dict,
    trace_to_dict,
)

from .render import render_svg

logger = logging.getLogger(__name__)

ORACLE_LISTING_LIMIT = 20


def _fmt(point: Rat2) -> str:
    return f"({format_rational(point.x)}, {format_rational(point.y)})"


def _render(template_key: str, **context: Any) -> str:
    source = get_template(template_key, "reports")
    if source is None:
        raise FileNotFoundError(f"Report template '{template_key}' is missing")
    return Template(source).render(**context)


def _write_svg(body: Body, path: Optional[str], **kwargs: Any) -> None:
    if path:
        Path(path).write_text(render_svg(body, **kwargs), encoding="utf-8")
        logger.info("Wrote %s", path)


def _write_csv(frame: pd.DataFrame, path: Optional[str]) -> None:
    if path:
        frame.to_csv(path, index=False)
        logger.info("Wrote %s", path)


def _oracle_context(comparison: Optional[OracleComparison]) -> Optional[Dict[str, Any]]:
    if comparison is None:
        return None
    return {
        "hits": len(comparison.hits),
        "matched": len(comparison.matched),
        "unmatched": len(comparison.unmatched),
        "on_grid": len(comparison.on_grid),
        "extra": [_fmt(z) for z in comparison.extra],
        "consistent": comparison.consistent,
    }



def cmd_hedgehog(input_path: str, svg: Optional[str] = None, json_output: bool = False) -> str:
    """Middle sets, classified corners and the hull vertex count."""
    body = load_body(input_path)
    body_id = Path(input_path).stem
    if isinstance(body, ConvexPolygon):
        hedgehog = polygon_hedgehog(body)
        hull = hedgehog_hull(hedgehog)
        hull_vertices = set(hull.hull.vertices)
        corners = [
            {
                "index": n,
                "location": _fmt(c.location),
                "kind": c.kind,
                "on_hull": c.location in hull_vertices,
                "p": _fmt(c.opposite_pair[0]),
                "q": _fmt(c.opposite_pair[1]),
            }
            for n, c in enumerate(hedgehog.corners)
        ]
        middle_sets = [
            {
                "index": ms.index,
                "start": _fmt(ms.geometry.a),
                "end": _fmt(ms.geometry.b),
                "point": ms.geometry.degenerate,
            }
            for ms in hedgehog.middle_sets
        ]
        context = dict(
            body_id=body_id, kind="polygon", middle_sets=middle_sets, corners=corners,
            weak=hedgehog.weak_count, strong=hedgehog.strong_count, hull_count=hull.vertex_count,
        )
    else:
        hedgehog = smooth_hedgehog(body)
        summary = smooth_hull_summary(hedgehog)
        context = dict(
            body_id=body_id, kind=body.kind, description=smooth_body_summary(body), samples=len(hedgehog.angles),
            hull_count=summary.vertex_count, degenerate=summary.degenerate,
        )
    _write_svg(body, svg, title=body_id)
    if json_output:
        return dumps(context).rstrip("\n")
    return _render("hedgehog", **context)


def cmd_convexity(
    input_path: str,
    oracle: Optional[int] = None,
    svg: Optional[str] = None,
    csv: Optional[str] = None,
    json_output: bool = False,
) -> str:
    """Convexity-point candidates with verdicts and an affinely independent triple."""
    body = load_body(input_path)
    body_id = Path(input_path).stem
    report = find_convexity_triple(body, body_id=body_id, fallback_grid=oracle)
    if oracle is not None:
        if not isinstance(body, ConvexPolygon):
            raise PreconditionError("The oracle grid needs a polygon body")
        if report.symmetric:
            logger.info("Centrally symmetric body: no hedgehog candidates to compare with the grid")
        else:
            report = report.model_copy(update={"oracle": compare_with_oracle(body, report.verified, oracle)})
    _write_csv(report.to_frame(), csv)
    layers = ["body", "convexity-points"] if report.symmetric else ["body", "hedgehog", "hull", "convexity-points"]
    spec = RenderSpec(layers=layers)
    _write_svg(body, svg, spec=spec, convexity_points=report.verified, title=body_id)
    if json_output:
        return dumps(report_to_dict(report)).rstrip("\n")
    return _render(
        "convexity",
        body_id=body_id,
        symmetric=report.symmetric,
        center=_fmt(report.center) if report.center is not None else None,
        candidates=[
            {"point": _fmt(c.point), "corner": c.corner.kind if c.corner else None, "verified": c.verified}
            for c in report.candidates
        ],
        triple=[_fmt(p) for p in report.affine_independent_triple] if report.affine_independent_triple else None,
        oracle_grid=oracle,
        oracle=_oracle_context(report.oracle),
    )


def cmd_perturb(
    input_path: str,
    eps: str,
    target: int,
    seed: int = 0,
    smooth: bool = False,
    out_dir: str = ".",
    svg: Optional[str] = None,
    csv: Optional[str] = None,
    json_output: bool = False,
) -> Tuple[str, Optional[str]]:
    """
    Runs the perturbation engine and writes trace.json, final.json and, with
    ``smooth``, smooth.json plus certificate.json into ``out_dir``.

    Returns the report text and the engine's error message, if any.
    """
    body = load_body(input_path)
    body_id = Path(input_path).stem
    epsilon = to_fraction(eps)
    if epsilon <= 0:
        raise ValueError(f"--eps must be positive, got {eps}")
    engine = PerturbationEngine(body, epsilon, target, seed)
    trace, error = engine.run()

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: List[str] = []
    (out / "trace.json").write_text(dumps(trace_to_dict(trace)), encoding="utf-8")
    written.append(str(out / "trace.json"))

    smoothing = None
    if trace.steps and error is None:
        dump_body(trace.final, out / "final.json")
        written.append(str(out / "final.json"))
        if smooth:
            smooth_body, certificate = finalize_smooth(trace.final, body, epsilon)
            dump_body(smooth_body, out / "smooth.json")
            (out / "certificate.json").write_text(dumps(certificate_to_dict(certificate)), encoding="utf-8")
            written.extend([str(out / "smooth.json"), str(out / "certificate.json")])
            smoothing = certificate
        cut = trace.steps[-1].cut
        spec = RenderSpec(layers=["body", "hedgehog", "hull", "corners", "cut-overlay"])
        _write_svg(trace.final, svg, spec=spec, cut=cut, title=f"{body_id} perturbed")
    _write_csv(trace.to_frame(), csv)

    if json_output:
        payload: Dict[str, Any] = {"counts": trace.counts, "error": error, "written": written}
        if smoothing is not None:
            payload["smooth_count"] = smoothing.smooth_count
            payload["radius"] = smoothing.radius
        return dumps(payload).rstrip("\n"), error
    steps = [
        {
            "index": n,
            "vertices": step.polygon.k,
            "hull_count": step.hull_count,
            "lam": format_rational(step.cut.lam) if step.cut else None,
            "target": _fmt(step.cut.target) if step.cut else None,
        }
        for n, step in enumerate(trace.steps)
    ]
    text = _render(
        "perturb",
        body_id=body_id,
        eps=format_rational(epsilon),
        target=target,
        seed=seed,
        steps=steps,
        final_count=trace.counts[-1] if trace.steps else None,
        smoothing=smoothing,
        error=error,
        written=written,
    )
    return text, error


def cmd_render(
    input_path: str,
    svg: str,
    layers: Optional[Sequence[str]] = None,
    width: Optional[int] = None,
    height: Optional[int] = None,
    labels: bool = False,
    trace_path: Optional[str] = None,
) -> str:
    """Writes an SVG figure; ``trace_path`` supplies the last cut for the cut overlay."""
    body = load_body(input_path)
    fields: Dict[str, Any] = {"show_labels": labels}
    if layers:
        fields["layers"] = list(layers)
    if width:
        fields["width"] = width
    if height:
        fields["height"] = height
    spec = RenderSpec(**fields)
    points: List[Rat2] = []
    if "convexity-points" in spec.layers:
        points = find_convexity_triple(body).verified
    cut = None
    if trace_path:
        trace = trace_from_dict(json.loads(Path(trace_path).read_text(encoding="utf-8")))
        cut = next((step.cut for step in reversed(trace.steps) if step.cut), None)
    _write_svg(body, svg, spec=spec, convexity_points=points, cut=cut, title=Path(input_path).stem)
    return f"wrote {svg}"


def cmd_oracle(
    input_path: str,
    grid: int,
    svg: Optional[str] = None,
    csv: Optional[str] = None,
    json_output: bool = False,
) -> str:
    """Brute-force grid of convexity points, matched against the hedgehog hull vertices."""
    body = load_body(input_path)
    body_id = Path(input_path).stem
    if not isinstance(body, ConvexPolygon):
        raise PreconditionError("The oracle grid needs a polygon body")
    hits = brute_force_convexity_points(body, grid)
    try:
        candidates = candidate_convexity_points(body)
    except PreconditionError as e:
        logger.info("No hedgehog candidates: %s", e)
        candidates = None
    comparison = (
        compare_with_oracle(body, [c.point for c in candidates], grid, hits) if candidates is not None else None
    )
    extra = set(comparison.extra) if comparison else set()
    _write_csv(
        pd.DataFrame({
            "x": [format_rational(z.x) for z in hits],
            "y": [format_rational(z.y) for z in hits],
            "near_candidate": [None if comparison is None else z not in extra for z in hits],
        }),
        csv,
    )
    _write_svg(body, svg, spec=RenderSpec(layers=["body", "convexity-points"]), convexity_points=hits, title=body_id)
    if json_output:
        return dumps({
            "grid": grid,
            "hits": [[format_rational(z.x), format_rational(z.y)] for z in hits],
            "candidates": len(candidates) if candidates is not None else None,
            "comparison": oracle_to_dict(comparison) if comparison is not None else None,
        }).rstrip("\n")
    return _render(
        "oracle",
        body_id=body_id,
        grid=grid,
        hits=[_fmt(z) for z in hits],
        limit=ORACLE_LISTING_LIMIT,
        candidates=len(candidates) if candidates is not None else None,
        oracle=_oracle_context(comparison),
    )
