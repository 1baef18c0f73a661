"""
JSON wire format: pydantic request models and the converters between them
and the library types, plus serializers for results.

Scalars travel as text ("-inf", "3", "-1/2"); vectors as arrays of scalars.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Annotated

from ..algebra.freemod import TropPolynomial, TropVector
from ..algebra.matrix import DichotomyCertificate, TropMatrix
from ..algebra.semifield import TropScalar, Unbounded
from ..algebra.submod import Submodule
from ..curves.curve import (
    CurvePoint,
    Divisor,
    Edge,
    EdgeFunction,
    MetricGraph,
    RationalFunction,
)
from ..errors import InvalidInput, LengthMismatch
from ..geometry.planecurve import PlanePoint, Skeleton
from ..geometry.polytope import Polytope, ProjPoint

SCHEMA_VERSION = "1"

Scalar = Annotated[
    str,
    Field(pattern=r"^\s*(-inf|-?[0-9]+(/[0-9]+)?)\s*$", description='"-inf" or a rational "p/q"'),
]
Vector = List[Scalar]


class WireModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class TermModel(WireModel):
    exp: List[int] = Field(..., description="Integer exponents, one per variable")
    coeff: Scalar


class PolynomialModel(WireModel):
    nvars: Optional[int] = Field(None, ge=1, description="Needed only for an empty term list")
    terms: List[TermModel]


class ModuleModel(WireModel):
    ambient: int = Field(..., ge=1)
    generators: List[Vector] = Field(..., min_length=1)


class MatrixModel(WireModel):
    n: Optional[int] = Field(None, ge=1, description="Number of rows, checked when given")
    entries: List[List[Scalar]] = Field(..., min_length=1)


class PointsModel(WireModel):
    dim: int = Field(..., ge=0, description="n for points of TP^n (n+1 homogeneous coordinates)")
    points: List[Vector] = Field(..., min_length=1)


class EdgeModel(WireModel):
    name: Optional[str] = None
    ends: List[str] = Field(..., min_length=1, max_length=2, description="[tail, head], or [tail] for a ray")
    length: Optional[Scalar] = Field(None, alias="len")


class GraphModel(WireModel):
    vertices: List[str] = Field(..., min_length=1)
    edges: List[EdgeModel] = Field(..., min_length=1)


class CurvePointModel(WireModel):
    vertex: Optional[str] = None
    edge: Optional[str] = None
    offset: Optional[Scalar] = None

    @model_validator(mode="after")
    def _one_kind(self) -> "CurvePointModel":
        if (self.vertex is None) == (self.edge is None):
            raise ValueError("give either a vertex or an edge with an offset")
        if self.edge is not None and self.offset is None:
            raise ValueError("edge points need an offset")
        return self


class EdgeDataModel(WireModel):
    edge: str
    knots: List[Tuple[Scalar, Scalar]] = Field(..., min_length=1, description="(offset, value) from offset 0")
    tail_slope: Optional[int] = Field(None, description="Slope past the last knot, rays only")


class FunctionModel(WireModel):
    bottom: bool = False
    pieces: List[EdgeDataModel] = Field(default_factory=list)


class DivisorEntryModel(WireModel):
    point: CurvePointModel
    mult: int


class PlanePointModel(WireModel):
    x: Scalar
    y: Scalar


class ValuedTermModel(WireModel):
    exp: Tuple[int, int]
    val: Scalar


class TripleModel(WireModel):
    v1: Vector
    v2: Vector
    w: Vector


def parse_scalar(text: str) -> TropScalar:
    return TropScalar.parse(text)


def parse_rational(text: str) -> Fraction:
    value = TropScalar.parse(text)
    if value.is_neg_inf:
        raise InvalidInput(f"Expected a finite rational, got {text!r}")
    return value.value


def parse_vector(values: Sequence[str]) -> TropVector:
    return TropVector(tuple(parse_scalar(v) for v in values))


def parse_module(model: ModuleModel) -> Submodule:
    generators = tuple(parse_vector(g) for g in model.generators)
    for g in generators:
        if len(g) != model.ambient:
            raise LengthMismatch(f"Generator of length {len(g)} in T^{model.ambient}")
    return Submodule(model.ambient, generators)


def parse_matrix(model: MatrixModel) -> TropMatrix:
    if model.n is not None and model.n != len(model.entries):
        raise InvalidInput(f"Declared {model.n} rows, found {len(model.entries)}")
    return TropMatrix(tuple(tuple(parse_scalar(a) for a in row) for row in model.entries))


def parse_polytope(model: PointsModel) -> Polytope:
    points = [parse_vector(p) for p in model.points]
    for p in points:
        if len(p) != model.dim + 1:
            raise LengthMismatch(f"Point with {len(p)} coordinates in TP^{model.dim}")
    return Polytope.hull(points)


def parse_polynomial(model: PolynomialModel) -> TropPolynomial:
    if model.terms:
        nvars = len(model.terms[0].exp)
    elif model.nvars is not None:
        nvars = model.nvars
    else:
        raise InvalidInput("An empty polynomial needs nvars")
    return TropPolynomial(nvars, tuple((tuple(t.exp), parse_scalar(t.coeff)) for t in model.terms))


def parse_graph(model: GraphModel) -> MetricGraph:
    edges = []
    for i, e in enumerate(model.edges):
        name = e.name or f"E{i}"
        head = e.ends[1] if len(e.ends) == 2 else None
        length = parse_rational(e.length) if e.length is not None else None
        edges.append(Edge(name, e.ends[0], head, length))
    return MetricGraph(tuple(model.vertices), tuple(edges))


def parse_curve_point(graph: MetricGraph, model: CurvePointModel) -> CurvePoint:
    offset = parse_rational(model.offset) if model.offset is not None else None
    return graph.canonical(CurvePoint(model.vertex, model.edge, offset))


def parse_function(graph: MetricGraph, model: FunctionModel) -> RationalFunction:
    if model.bottom:
        return RationalFunction.bottom(graph)
    pieces = {}
    for data in model.pieces:
        if data.edge in pieces:
            raise InvalidInput(f"Edge {data.edge} has two data blocks")
        knots = tuple((parse_rational(t), parse_rational(y)) for t, y in data.knots)
        pieces[data.edge] = EdgeFunction(knots, data.tail_slope)
    return RationalFunction.from_pieces(graph, pieces)


def parse_divisor(graph: MetricGraph, entries: Sequence[DivisorEntryModel]) -> Divisor:
    return Divisor(tuple((parse_curve_point(graph, e.point), e.mult) for e in entries))


def parse_plane_point(model: PlanePointModel) -> PlanePoint:
    return PlanePoint(parse_rational(model.x), parse_rational(model.y))


def dump_scalar(a: TropScalar) -> str:
    return str(a)


def dump_bound(b: Any) -> str:
    return str(b) if isinstance(b, Unbounded) else str(Fraction(b))


def dump_vector(v: TropVector) -> List[str]:
    return [str(c) for c in v]


def dump_vectors(vectors: Sequence[TropVector]) -> List[List[str]]:
    return [dump_vector(v) for v in vectors]


def dump_matrix(A: TropMatrix) -> Dict[str, Any]:
    return {"n": A.n_rows, "entries": [[str(a) for a in row] for row in A.rows]}


def dump_certificate(cert: DichotomyCertificate) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"case": cert.case, "v": dump_vector(cert.v)}
    if cert.epsilon is not None:
        payload["epsilon"] = str(cert.epsilon)
    if cert.cycle is not None:
        payload["cycle"] = list(cert.cycle)
    return payload


def dump_point(p: ProjPoint) -> List[str]:
    return dump_vector(p.rep)


def dump_curve_point(p: CurvePoint) -> Dict[str, str]:
    if p.is_vertex:
        return {"vertex": p.vertex}
    return {"edge": p.edge, "offset": str(p.offset)}


def dump_divisor(D: Divisor) -> List[Dict[str, Any]]:
    return [{"point": dump_curve_point(p), "mult": m} for p, m in D.entries]


def dump_function(f: RationalFunction) -> Dict[str, Any]:
    if f.is_bottom:
        return {"bottom": True, "pieces": []}
    pieces = []
    for name, piece in f.pieces:
        data: Dict[str, Any] = {"edge": name, "knots": [[str(t), str(y)] for t, y in piece.knots]}
        if piece.tail_slope is not None:
            data["tail_slope"] = piece.tail_slope
        pieces.append(data)
    return {"bottom": False, "pieces": pieces}


def dump_polynomial(f: TropPolynomial) -> Dict[str, Any]:
    return {"nvars": f.nvars, "terms": [{"exp": list(e), "coeff": str(c)} for e, c in f.terms]}


def dump_plane_point(p: PlanePoint) -> List[str]:
    return [str(p.x), str(p.y)]


def dump_skeleton(sk: Skeleton) -> Dict[str, Any]:
    return {
        "vertices": [dump_plane_point(p) for p in sk.vertices],
        "bounded_edges": [
            {"ends": [e.start, e.end], "direction": list(e.direction), "multiplicity": e.multiplicity}
            for e in sk.bounded_edges
        ],
        "rays": [
            {"vertex": r.vertex, "direction": list(r.direction), "multiplicity": r.multiplicity}
            for r in sk.rays
        ],
        "lines": [
            {
                "point": dump_plane_point(line.point),
                "direction": list(line.direction),
                "multiplicity": line.multiplicity,
            }
            for line in sk.lines
        ],
    }

