"""
Command tools: one class per CLI subcommand.

A small JSON dispatcher. Each tool names a pydantic ``request_model`` and an
``execute`` method; ``run`` validates the payload, calls ``execute`` and wraps
the outcome in the {"ok", "result", "error"} envelope. No exception escapes
``run``: unexpected ones are logged and reported as InternalVerificationFailed.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Literal, Optional, Type

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from ..algebra import semifield
from ..algebra.matrix import det_by_assignment, ff3_stabilize, ff4_solve, mat_apply, trop_det
from ..algebra.submod import left_inverse
from ..config.settings import get_settings
from ..curves.curve import SectionWitness, fe7_construct, is_section, principal_divisor
from ..errors import InternalVerificationFailed, InvalidInput, TropicalError
from ..geometry.planecurve import betti1, on_curve, skeleton, tropicalize
from ..workflows.fixtures import FixtureWorkflow
from .codec import (
    SCHEMA_VERSION,
    CurvePointModel,
    DivisorEntryModel,
    FunctionModel,
    GraphModel,
    MatrixModel,
    ModuleModel,
    PlanePointModel,
    PointsModel,
    PolynomialModel,
    Scalar,
    TripleModel,
    ValuedTermModel,
    Vector,
    WireModel,
    dump_bound,
    dump_certificate,
    dump_divisor,
    dump_function,
    dump_matrix,
    dump_point,
    dump_polynomial,
    dump_skeleton,
    dump_vector,
    dump_vectors,
    parse_curve_point,
    parse_divisor,
    parse_function,
    parse_graph,
    parse_matrix,
    parse_module,
    parse_plane_point,
    parse_polynomial,
    parse_polytope,
    parse_rational,
    parse_scalar,
    parse_vector,
)

logger = logging.getLogger(__name__)

Envelope = Dict[str, Any]


def _envelope(ok: bool, result: Any = None, error: Optional[Dict[str, Any]] = None) -> Envelope:
    return {"ok": ok, "result": result, "error": error}


def _validation_message(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        location = ".".join(str(part) for part in err["loc"]) or "request"
        parts.append(f"{location}: {err['msg']}")
    return "; ".join(parts)


class CommandTool(ABC):
    """Base for every subcommand: a name, a description and a request model."""

    name: str
    description: str
    request_model: Type[BaseModel]

    def run(self, payload: Any) -> Envelope:
        try:
            request = self.request_model.model_validate(payload)
        except ValidationError as exc:
            logger.info("%s: rejected request", self.name)
            return _envelope(False, error={"code": InvalidInput.__name__, "message": _validation_message(exc)})
        try:
            return _envelope(True, result=self.execute(request))
        except TropicalError as exc:
            logger.info("%s failed with %s: %s", self.name, exc.code, exc.message)
            return _envelope(False, error=exc.to_dict())
        except Exception:
            logger.exception("%s crashed", self.name)
            error = InternalVerificationFailed(f"Unexpected failure in {self.name}")
            return _envelope(False, error=error.to_dict())

    @abstractmethod
    def execute(self, request: Any) -> Any:
        """Library call for a validated request; the result must be JSON-ready."""


# ----------------------------------------------------------------- semifield


class ScalarInput(WireModel):
    op: Literal["parse", "add", "mul", "div", "pow", "root", "inverse", "compare"]
    a: Scalar
    b: Optional[Scalar] = None
    k: Optional[int] = Field(None, description="Exponent for pow, order for root")

    @model_validator(mode="after")
    def _operands(self) -> "ScalarInput":
        if self.op in ("add", "mul", "div", "compare") and self.b is None:
            raise ValueError(f"{self.op} needs b")
        if self.op in ("pow", "root") and self.k is None:
            raise ValueError(f"{self.op} needs k")
        return self


class ScalarTool(CommandTool):
    name = "scalar"
    description = "Exact semifield arithmetic on scalars in text form"
    request_model = ScalarInput

    def execute(self, request: ScalarInput) -> Any:
        a = parse_scalar(request.a)
        b = parse_scalar(request.b) if request.b is not None else None
        if request.op == "parse":
            return str(a)
        if request.op == "add":
            return str(semifield.add(a, b))
        if request.op == "mul":
            return str(semifield.mul(a, b))
        if request.op == "div":
            return str(semifield.div(a, b))
        if request.op == "pow":
            return str(semifield.power(a, request.k))
        if request.op == "root":
            return str(semifield.root(a, request.k))
        if request.op == "inverse":
            return str(a.inverse())
        return -1 if a < b else (1 if a > b else 0)


# ------------------------------------------------------------------- submod


class ModuleVectorInput(WireModel):
    module: ModuleModel
    vector: Vector


class ModuleInput(WireModel):
    module: ModuleModel


class ContainsTool(CommandTool):
    name = "contains"
    description = "Decide membership of a vector in a finitely generated submodule"
    request_model = ModuleVectorInput

    def execute(self, request: ModuleVectorInput) -> Any:
        module = parse_module(request.module)
        v = parse_vector(request.vector)
        return {"contains": module.contains(v), "projection": dump_vector(module.project(v))}


class ProjectTool(CommandTool):
    name = "project"
    description = "Greatest module element below a vector, with its residuation coefficients"
    request_model = ModuleVectorInput

    def execute(self, request: ModuleVectorInput) -> Any:
        module = parse_module(request.module)
        v = parse_vector(request.vector)
        coeffs = module.residuation_coeffs(v)
        return {"projection": dump_vector(module.project(v)), "coefficients": [str(c) for c in coeffs]}


class BasisTool(CommandTool):
    name = "basis"
    description = "Canonical minimal generating set, one normalized vector per extremal ray"
    request_model = ModuleInput

    def execute(self, request: ModuleInput) -> Any:
        return dump_vectors(parse_module(request.module).minimal_generators())


class DimTool(CommandTool):
    name = "dim"
    description = "Number of extremal rays of the module"
    request_model = ModuleInput

    def execute(self, request: ModuleInput) -> Any:
        return parse_module(request.module).dimension()


class LatticeInput(WireModel):
    module: ModuleModel
    interior_only: bool = True


class LatticeCheckTool(CommandTool):
    name = "latcheck"
    description = "Lattice-preserving test; on success also the section map and inequality system"
    request_model = LatticeInput

    def execute(self, request: LatticeInput) -> Any:
        module = parse_module(request.module)
        certificate = module.is_lattice_preserving(request.interior_only)
        result: Dict[str, Any] = {
            "preserving": certificate.preserving,
            "failing_coordinate": certificate.failing_coordinate,
            "minima": [dump_vector(m) if m is not None else None for m in certificate.minima],
        }
        if certificate:
            sections = module.section_map(request.interior_only)
            result["basis"] = dump_vectors(sections.basis)
            result["assignment"] = list(sections.assignment)
            result["bounds"] = [[dump_bound(c) for c in row] for row in sections.bounds]
            result["dead"] = list(sections.dead)
        return result


class StraightnessInput(WireModel):
    module: ModuleModel
    triples: Optional[List[TripleModel]] = None
    samples: Optional[int] = Field(None, ge=1, description="Random triples drawn when none are given")


class StraightCheckTool(CommandTool):
    name = "straightcheck"
    description = "Search for a violation of the distributive laws on given or sampled triples"
    request_model = StraightnessInput

    def execute(self, request: StraightnessInput) -> Any:
        module = parse_module(request.module)
        if request.triples is not None:
            triples = [(parse_vector(t.v1), parse_vector(t.v2), parse_vector(t.w)) for t in request.triples]
        else:
            settings = get_settings()
            rng = np.random.default_rng(settings.seed)
            triples = module.sample_triples(rng, request.samples or settings.sample_count)
        report = module.straightness_sample_check(triples)
        result: Dict[str, Any] = {"holds": report.holds, "checked": report.checked, "counterexample": None}
        if report.counterexample is not None:
            violation = report.counterexample
            result["counterexample"] = {
                "triple": dump_vectors(violation.triple),
                "condition": violation.condition,
                "left": dump_vector(violation.left),
                "right": dump_vector(violation.right),
            }
        return result


class LeftInverseInput(WireModel):
    vector: Vector
    matrix: Optional[MatrixModel] = None
    module: Optional[ModuleModel] = None

    @model_validator(mode="after")
    def _one_source(self) -> "LeftInverseInput":
        if (self.matrix is None) == (self.module is None):
            raise ValueError("give exactly one of matrix or module")
        return self


class LeftInverseTool(CommandTool):
    name = "leftinv"
    description = "Residuated left inverse of an injective matrix, or the left inversion of a module inclusion"
    request_model = LeftInverseInput

    def execute(self, request: LeftInverseInput) -> Any:
        w = parse_vector(request.vector)
        if request.matrix is not None:
            return {"vector": dump_vector(left_inverse(parse_matrix(request.matrix), w))}
        module = parse_module(request.module)
        return {
            "vector": dump_vector(module.left_inverse_of_inclusion(w)),
            "matrix": dump_matrix(module.left_inversion_matrix()),
        }


# ------------------------------------------------------------------- matrix


class MatrixInput(WireModel):
    matrix: MatrixModel


class DetInput(MatrixInput):
    method: Literal["enumeration", "assignment"] = "enumeration"


class DetTool(CommandTool):
    name = "det"
    description = "Tropical determinant by exact permutation search or by the assignment solver"
    request_model = DetInput

    def execute(self, request: DetInput) -> Any:
        A = parse_matrix(request.matrix)
        if request.method == "assignment":
            return str(det_by_assignment(A))
        return str(trop_det(A, get_settings().det_max_order))


class PowerInput(MatrixInput):
    k: int = Field(..., ge=0)
    vector: Optional[Vector] = Field(None, description="When given, return A^k applied to it")


class PowerTool(CommandTool):
    name = "pow"
    description = "Matrix power A^k, optionally applied to a vector"
    request_model = PowerInput

    def execute(self, request: PowerInput) -> Any:
        A = parse_matrix(request.matrix).power(request.k)
        result: Dict[str, Any] = {"matrix": dump_matrix(A)}
        if request.vector is not None:
            result["vector"] = dump_vector(mat_apply(A, parse_vector(request.vector)))
        return result


class StabilizeTool(CommandTool):
    name = "ff3"
    description = "Power stabilization A^n = A^(n-1) under Δ(A) = E and det(A) = 0"
    request_model = MatrixInput

    def execute(self, request: MatrixInput) -> Any:
        outcome = ff3_stabilize(parse_matrix(request.matrix), get_settings().det_max_order)
        return {"power": dump_matrix(outcome.power), "verified": outcome.verified}


class DichotomyTool(CommandTool):
    name = "ff4"
    description = "Eigen-dichotomy certificate, re-verified before it is returned"
    request_model = MatrixInput

    def execute(self, request: MatrixInput) -> Any:
        return dump_certificate(ff4_solve(parse_matrix(request.matrix), get_settings().det_max_order))


# ----------------------------------------------------------------- polytope


class PolytopeInput(WireModel):
    polytope: PointsModel


class MemberInput(PolytopeInput):
    point: Vector


class HullTool(CommandTool):
    name = "hull"
    description = "Tropical convex hull: its extremal points in normalized form"
    request_model = PolytopeInput

    def execute(self, request: PolytopeInput) -> Any:
        P = parse_polytope(request.polytope)
        return {
            "dim": P.dim,
            "points": [dump_point(p) for p in P.points],
            "extremal": dump_vectors(P.module.minimal_generators()),
        }


class MemberTool(CommandTool):
    name = "member"
    description = "Membership of a projective point in a tropical polytope"
    request_model = MemberInput

    def execute(self, request: MemberInput) -> Any:
        P = parse_polytope(request.polytope)
        return P.contains_point(parse_vector(request.point))


class PolytropeCheckTool(CommandTool):
    name = "polytrope-check"
    description = "Decide whether the hull is also convex in the ordinary sense"
    request_model = PolytopeInput

    def execute(self, request: PolytopeInput) -> Any:
        certificate = parse_polytope(request.polytope).is_polytrope()
        return {"polytrope": certificate.preserving, "failing_coordinate": certificate.failing_coordinate}


class VerticesTool(CommandTool):
    name = "vertices"
    description = "At most n+1 vertices of a polytrope"
    request_model = PolytopeInput

    def execute(self, request: PolytopeInput) -> Any:
        return [dump_point(p) for p in parse_polytope(request.polytope).vertices()]


class InequalitiesTool(CommandTool):
    name = "ineqs"
    description = "The c-matrix with polytrope = {x : x_j ≥ x_i - c_ij}"
    request_model = PolytopeInput

    def execute(self, request: PolytopeInput) -> Any:
        bounds = parse_polytope(request.polytope).defining_inequalities()
        return [[dump_bound(c) for c in row] for row in bounds]


# -------------------------------------------------------------------- curve


class FunctionInput(WireModel):
    graph: GraphModel
    function: FunctionModel


class OrderInput(FunctionInput):
    point: CurvePointModel


class SectionInput(FunctionInput):
    divisor: List[DivisorEntryModel]


class Fe7Input(WireModel):
    graph: GraphModel
    sections: List[FunctionModel] = Field(..., min_length=1)
    points: List[CurvePointModel] = Field(..., min_length=1)
    divisor: List[DivisorEntryModel]


class OrderTool(CommandTool):
    name = "ord"
    description = "Sum of outgoing slopes of a function at a point"
    request_model = OrderInput

    def execute(self, request: OrderInput) -> Any:
        graph = parse_graph(request.graph)
        f = parse_function(graph, request.function)
        return f.order(parse_curve_point(graph, request.point))


class DivisorTool(CommandTool):
    name = "divisor"
    description = "Principal divisor of a function"
    request_model = FunctionInput

    def execute(self, request: FunctionInput) -> Any:
        graph = parse_graph(request.graph)
        D = principal_divisor(parse_function(graph, request.function))
        return {"entries": dump_divisor(D), "degree": D.degree}


class SectionCheckTool(CommandTool):
    name = "section-check"
    description = "Is the function a section of the divisor"
    request_model = SectionInput

    def execute(self, request: SectionInput) -> Any:
        graph = parse_graph(request.graph)
        f = parse_function(graph, request.function)
        return is_section(f, parse_divisor(graph, request.divisor))


class Fe7Tool(CommandTool):
    name = "fe7"
    description = "Evaluate sections at points and return a section witness or a box module"
    request_model = Fe7Input

    def execute(self, request: Fe7Input) -> Any:
        graph = parse_graph(request.graph)
        sections = [parse_function(graph, f) for f in request.sections]
        points = [parse_curve_point(graph, p) for p in request.points]
        outcome = fe7_construct(sections, points, parse_divisor(graph, request.divisor))
        result: Dict[str, Any] = {
            "matrix": dump_matrix(outcome.matrix),
            "certificate": dump_certificate(outcome.certificate),
            "v": dump_vector(outcome.v),
        }
        if isinstance(outcome, SectionWitness):
            result["kind"] = "section"
            result["function"] = dump_function(outcome.function)
            result["off_diagonal"] = list(outcome.off_diagonal)
            result["residual"] = dump_divisor(outcome.residual)
        else:
            result["kind"] = "box"
            result["epsilon"] = str(outcome.epsilon)
            result["generators"] = dump_vectors(outcome.module.generators)
            result["dimension"] = outcome.dimension
            result["acts_diagonally"] = outcome.acts_diagonally
            result["images"] = [dump_function(g) for g in outcome.images]
        return result


# --------------------------------------------------------------- planecurve


class PolynomialInput(WireModel):
    polynomial: PolynomialModel


class OnCurveInput(PolynomialInput):
    point: PlanePointModel


class TropicalizeInput(WireModel):
    terms: List[ValuedTermModel]


class OnCurveTool(CommandTool):
    name = "oncurve"
    description = "Is the maximum of a bivariate polynomial attained twice at the point"
    request_model = OnCurveInput

    def execute(self, request: OnCurveInput) -> Any:
        return on_curve(parse_polynomial(request.polynomial), parse_plane_point(request.point))


class SkeletonTool(CommandTool):
    name = "skeleton"
    description = "Vertices, bounded edges, rays and lines of a tropical plane curve"
    request_model = PolynomialInput

    def execute(self, request: PolynomialInput) -> Any:
        return dump_skeleton(skeleton(parse_polynomial(request.polynomial)))


class BettiTool(CommandTool):
    name = "betti"
    description = "First Betti number of a tropical plane curve"
    request_model = PolynomialInput

    def execute(self, request: PolynomialInput) -> Any:
        return betti1(skeleton(parse_polynomial(request.polynomial)))


class TropicalizeTool(CommandTool):
    name = "tropicalize"
    description = "Tropical polynomial with coefficients -val(c) from valued terms"
    request_model = TropicalizeInput

    def execute(self, request: TropicalizeInput) -> Any:
        f = tropicalize((t.exp, parse_rational(t.val)) for t in request.terms)
        return dump_polynomial(f)


# ----------------------------------------------------------------- fixtures


class FixturesInput(WireModel):
    samples: Optional[int] = Field(None, ge=1)


class FixturesTool(CommandTool):
    name = "fixtures"
    description = "Run the worked-example corpus; ok only when every check passes"
    request_model = FixturesInput

    def run(self, payload: Any) -> Envelope:
        envelope = super().run(payload)
        if envelope["ok"] and envelope["result"]["failed"]:
            failed = [c["name"] for c in envelope["result"]["checks"] if not c["passed"]]
            envelope["ok"] = False
            envelope["error"] = {"code": "FixtureFailed", "message": f"Failed checks: {', '.join(failed)}"}
        return envelope

    def execute(self, request: FixturesInput) -> Any:
        return FixtureWorkflow(samples=request.samples).run()


TOOLS: List[CommandTool] = [
    ScalarTool(),
    ContainsTool(),
    MemberTool(),
    ProjectTool(),
    BasisTool(),
    DimTool(),
    LatticeCheckTool(),
    StraightCheckTool(),
    LeftInverseTool(),
    DetTool(),
    PowerTool(),
    StabilizeTool(),
    DichotomyTool(),
    HullTool(),
    PolytropeCheckTool(),
    VerticesTool(),
    InequalitiesTool(),
    OrderTool(),
    DivisorTool(),
    SectionCheckTool(),
    Fe7Tool(),
    OnCurveTool(),
    SkeletonTool(),
    BettiTool(),
    TropicalizeTool(),
    FixturesTool(),
]

TOOLS_BY_NAME: Dict[str, CommandTool] = {tool.name: tool for tool in TOOLS}


def get_tool(name: str) -> CommandTool:
    try:
        return TOOLS_BY_NAME[name]
    except KeyError:
        raise InvalidInput(f"Unknown command {name!r}")


def schemas() -> Dict[str, Any]:
    """Request JSON schema of every command, stamped with the schema version."""
    return {
        "schema_version": SCHEMA_VERSION,
        "commands": {tool.name: tool.request_model.model_json_schema() for tool in TOOLS},
    }
