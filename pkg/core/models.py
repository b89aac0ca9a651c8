from fractions import Fraction
from typing import Any, List, Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .kernel import HullPolygon, Rat2, Segment, add, midpoint, scale

Exact = Union[Fraction, float]

LAYER_NAMES = (
    "body",
    "hedgehog",
    "hull",
    "corners",
    "convexity-points",
    "affine-diameters",
    "cut-overlay",
)


class ConvexPolygon(BaseModel):
    """Counterclockwise, strictly convex vertex cycle with exact coordinates.

    Build instances through ``core.body.make_polygon`` which checks convexity;
    the model itself only stores the cycle.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vertices: Tuple[Rat2, ...] = Field(..., min_length=3, description="ccw vertex cycle")

    @property
    def k(self) -> int:
        return len(self.vertices)

    def edge(self, index: int) -> Tuple[Rat2, Rat2]:
        """Edge ``index`` runs from vertex ``index`` to vertex ``index + 1``."""
        n = len(self.vertices)
        return self.vertices[index % n], self.vertices[(index + 1) % n]

    def edges(self) -> List[Tuple[Rat2, Rat2]]:
        return [self.edge(i) for i in range(len(self.vertices))]


class FourierTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    j: int = Field(..., ge=1, description="Harmonic index")
    a: float = Field(0.0, description="Cosine coefficient")
    b: float = Field(0.0, description="Sine coefficient")


class ArcPiece(BaseModel):
    """Circular boundary arc owning the outer normals with angle in [start, end)."""
    model_config = ConfigDict(frozen=True)

    center: Tuple[float, float]
    radius: float = Field(..., ge=0, description="0 marks a corner of the arcgon")
    start: float = Field(..., description="Normal angle where the arc begins (radians)")
    end: float = Field(..., description="Normal angle where the arc ends, end > start")

    @field_validator("end")
    @classmethod
    def _end_after_start(cls, v: float, info) -> float:
        start = info.data.get("start")
        if start is not None and v <= start:
            raise ValueError("arc normal interval must have end > start")
        return v


class SmoothBody(BaseModel):
    """Strictly convex body given by its support function."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["arcgon", "fourier"]
    arcs: List[ArcPiece] = Field(default_factory=list, description="Arcgon pieces in ccw normal order")
    a0: float = Field(0.0, description="Constant term of the fourier support function")
    terms: List[FourierTerm] = Field(default_factory=list, description="Fourier harmonics j >= 1")


Body = Union[ConvexPolygon, SmoothBody]


class SupportResult(BaseModel):
    """Support value h(K, u) and the face F(K, u)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Any = Field(..., description="Fraction for polygons, float for smooth bodies")
    face: Any = Field(..., description="Segment for polygons, (x, y) float pair for smooth bodies")


class Line(BaseModel):
    """The line {x : <x, normal> = offset}."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    normal: Any
    offset: Any

    def contains(self, point) -> bool:
        value = point[0] * self.normal[0] + point[1] * self.normal[1]
        if isinstance(self.offset, Fraction) and isinstance(value, Fraction):
            return value == self.offset
        return abs(float(value) - float(self.offset)) <= 1e-12 * max(1.0, abs(float(self.offset)))


class EdgeNormalFan(BaseModel):
    """Half-turn reduced edge normals of a polygon in increasing angle order."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rotation: float = Field(..., description="Angle applied before analysis (radians)")
    rotation_steps: int = Field(0, ge=0, description="Number of elementary rational rotations applied")
    angles: Tuple[float, ...] = Field(..., description="phi_1 < ... < phi_k in (-pi/2, pi/2)")
    edge_of: Tuple[int, ...] = Field(..., description="angle index -> polygon edge index")
    outer_flag: Tuple[bool, ...] = Field(..., description="u(phi_i) is the outer normal of E_i")
    normals: Tuple[Rat2, ...] = Field(..., description="Unrotated edge normal with the orientation of u(phi_i)")

    @property
    def k(self) -> int:
        return len(self.angles)


class MiddleSet(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    index: int = Field(..., description="Angle index i in the fan")
    normal_angle: float
    geometry: Segment
    source: Tuple[Segment, Segment] = Field(..., description="Faces F(K, u) and F(K, -u)")


class Corner(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    location: Rat2
    kind: Literal["weak", "strong"]
    opposite_pair: Tuple[Rat2, Rat2] = Field(..., description="Vertices p (max side) and q (min side)")
    between: Tuple[int, int] = Field(..., description="Angle indices (i, i+1 mod k)")


class MiddleHedgehog(BaseModel):
    """Polygon case: middle sets and corners. Smooth case: sampled curve."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["polygon", "smooth"]
    middle_sets: List[MiddleSet] = Field(default_factory=list)
    corners: List[Corner] = Field(default_factory=list)
    fan: Optional[EdgeNormalFan] = None
    angles: Optional[np.ndarray] = Field(None, description="Sample angles in [0, pi)")
    points: Optional[np.ndarray] = Field(None, description="x(phi) samples, shape (n, 2)")
    body: Optional[SmoothBody] = None

    @property
    def weak_count(self) -> int:
        return sum(1 for c in self.corners if c.kind == "weak")

    @property
    def strong_count(self) -> int:
        return sum(1 for c in self.corners if c.kind == "strong")


class HedgehogHull(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    hull: HullPolygon
    hull_corners: List[Corner] = Field(default_factory=list, description="Corner at each hull vertex, hull order")

    @property
    def vertex_count(self) -> int:
        return len(self.hull.vertices)


class SmoothHullSummary(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vertex_count: int = Field(..., ge=1)
    cluster_points: List[Tuple[float, float]] = Field(default_factory=list)
    degenerate: bool = False


class Candidate(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    point: Rat2
    corner: Optional[Corner] = None
    verified: bool = False


class OracleComparison(BaseModel):
    """Grid hits set against the hedgehog candidates, matched within one grid cell."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: int = Field(..., ge=16)
    cell: Tuple[Fraction, Fraction] = Field(..., description="Grid spacing (dx, dy)")
    hits: List[Rat2] = Field(default_factory=list)
    matched: List[Rat2] = Field(default_factory=list, description="Candidates with a hit within one cell")
    unmatched: List[Rat2] = Field(default_factory=list, description="Candidates with no hit within one cell")
    on_grid: List[Rat2] = Field(default_factory=list, description="Candidates lying on a grid node")
    extra: List[Rat2] = Field(default_factory=list, description="Hits farther than one cell from every candidate")

    @property
    def consistent(self) -> bool:
        """Every candidate on a grid node is hit, and every hit is near a candidate."""
        return not self.extra and all(z in self.matched for z in self.on_grid)


class ConvexityReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    body_id: str = "body"
    candidates: List[Candidate] = Field(default_factory=list)
    affine_independent_triple: Optional[Tuple[Rat2, Rat2, Rat2]] = None
    symmetric: bool = False
    center: Optional[Rat2] = None
    oracle: Optional[OracleComparison] = None

    @property
    def verified(self) -> List[Rat2]:
        return [c.point for c in self.candidates if c.verified]

    def to_frame(self) -> pd.DataFrame:
        matched = set(self.oracle.matched) if self.oracle else set()
        rows = [
            {
                "x": str(c.point.x),
                "y": str(c.point.y),
                "corner_kind": c.corner.kind if c.corner else None,
                "verified": c.verified,
                "in_triple": bool(self.affine_independent_triple) and c.point in self.affine_independent_triple,
                "oracle_match": (c.point in matched) if self.oracle else None,
            }
            for c in self.candidates
        ]
        return pd.DataFrame(rows, columns=["x", "y", "corner_kind", "verified", "in_triple", "oracle_match"])


class CutConstruction(BaseModel):
    """All parameters of one vertex-pair cut. Vectors are exact."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    target: Rat2 = Field(..., description="Hull vertex x of the hedgehog")
    p: Rat2 = Field(..., description="Vertex whose new edge joins E_i and E_j")
    q: Rat2 = Field(..., description="Vertex whose new edge joins E_i+1 and E_m")
    edge_i: Tuple[Rat2, Rat2]
    edge_i1: Tuple[Rat2, Rat2]
    edge_j: Tuple[Rat2, Rat2]
    edge_m: Tuple[Rat2, Rat2]
    support_normal: Rat2 = Field(..., description="Outer normal of S with respect to the hull")
    alpha: float = Field(..., description="Angle of the support normal")
    s: Rat2
    s1: Rat2
    s2: Rat2
    t: Rat2
    t1: Rat2
    t2: Rat2
    tau: Fraction
    sigma: Fraction
    lam: Fraction
    psi_p: float
    psi_q: float
    swapped: bool = Field(False, description="Roles of p and q exchanged")

    @property
    def y(self) -> Rat2:
        return midpoint(add(self.p, scale(self.t2, self.lam)), add(self.q, scale(self.s1, self.lam)))

    @property
    def z(self) -> Rat2:
        return midpoint(add(self.p, scale(self.t1, self.lam)), add(self.q, scale(self.s2, self.lam)))

    def new_points(self) -> Tuple[Rat2, Rat2, Rat2, Rat2]:
        lam = self.lam
        return (
            add(self.p, scale(self.t1, lam)),
            add(self.p, scale(self.t2, lam)),
            add(self.q, scale(self.s1, lam)),
            add(self.q, scale(self.s2, lam)),
        )


class TraceStep(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    polygon: ConvexPolygon
    hull_count: int = Field(..., ge=1)
    cut: Optional[CutConstruction] = None
    inner_contained: bool = Field(..., description="K inside int P, verified")
    outer_contained: bool = Field(..., description="P inside int(K + eps B), verified")


class PerturbationTrace(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    epsilon: Fraction
    target: int
    seed: int
    steps: List[TraceStep] = Field(default_factory=list)

    @property
    def counts(self) -> List[int]:
        return [s.hull_count for s in self.steps]

    @property
    def final(self) -> ConvexPolygon:
        return self.steps[-1].polygon

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for n, step in enumerate(self.steps):
            cut = step.cut
            rows.append({
                "step": n,
                "vertices": step.polygon.k,
                "hull_count": step.hull_count,
                "lambda": str(cut.lam) if cut else None,
                "tau": str(cut.tau) if cut else None,
                "sigma": str(cut.sigma) if cut else None,
                "target_x": str(cut.target.x) if cut else None,
                "target_y": str(cut.target.y) if cut else None,
            })
        return pd.DataFrame(rows)


class SmoothingCertificate(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    radius: float = Field(..., gt=0)
    rounding: float = Field(..., ge=0)
    polygon_count: int
    smooth_count: int
    distance_history: List[Tuple[float, float]] = Field(
        default_factory=list, description="(R, delta(M, Q)) for every attempted radius"
    )
    body: SmoothBody


class RenderSpec(BaseModel):
    width: int = Field(800, ge=64)
    height: int = Field(800, ge=64)
    layers: List[str] = Field(default_factory=lambda: ["body", "hedgehog", "hull", "corners"], min_length=1)
    stroke_width: float = Field(1.5, gt=0)
    show_labels: bool = False

    @field_validator("layers")
    @classmethod
    def _known_layers(cls, v: List[str]) -> List[str]:
        unknown = [layer for layer in v if layer not in LAYER_NAMES]
        if unknown:
            raise ValueError(f"Unknown layers: {unknown}")
        return v
