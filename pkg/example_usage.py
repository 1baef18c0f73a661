"""
Short tour of the tropical toolkit as a library.
"""

from fractions import Fraction

from src.algebra.freemod import TropPolynomial, TropVector
from src.algebra.matrix import TropMatrix, ff4_solve, trop_det
from src.algebra.semifield import TropScalar
from src.algebra.submod import Submodule
from src.curves.curve import CurvePoint, principal_divisor
from src.geometry.planecurve import betti1, product_family, skeleton
from src.geometry.polytope import hull
from src.workflows import catalog


def run_examples():
    """Print a few worked computations."""
    print("=" * 60)
    print("SCALARS")
    print("=" * 60)
    a, b = TropScalar(2), TropScalar.parse("-1/2")
    print(f"{a} ⊕ {b} = {a + b}")
    print(f"{a} ⊙ {b} = {a * b}")

    print("\nSUBMODULES")
    M = Submodule.span([[0, 0], [0, 3], [0, 2]])
    v = TropVector.of([0, 2])
    print(f"basis of span{{(0,0),(0,3),(0,2)}}: {[str(g) for g in M.minimal_generators()]}")
    print(f"{v} in M: {M.contains(v)}; projection of (1, 0): {M.project(TropVector.of([1, 0]))}")

    print("\nTHE (2t, t, 0) FAMILY")
    span = catalog.family_span()
    report = span.straightness_sample_check([catalog.non_straight_triple()])
    print(f"straight on the sample triple: {report.holds}")
    if report.counterexample is not None:
        violation = report.counterexample
        print(f"  {violation.condition}: {violation.left} vs {violation.right}")

    print("\nMATRICES")
    A = TropMatrix.of([[0, -1], [-1, 0]])
    certificate = ff4_solve(A)
    print(f"det = {trop_det(A)}; dichotomy case {certificate.case}, v = {certificate.v}, ε = {certificate.epsilon}")

    print("\nPOLYTOPES")
    P = hull([[0, 0, 0], [0, 2, 0], [0, 0, 2]])
    print(f"polytrope: {bool(P.is_polytrope())}; vertices: {[str(p) for p in P.vertices()]}")

    print("\nCURVES")
    graph = catalog.segment_graph()
    tent = catalog.tent_function(graph)
    D = principal_divisor(tent)
    print(f"(tent) = {', '.join(f'{m}·{p}' for p, m in D.entries)}; degree {D.degree}")
    print(f"tent at the midpoint: {tent.evaluate(CurvePoint.on('E', Fraction(1)))}")

    print("\nPLANE CURVES")
    line = TropPolynomial.from_terms(2, {(0, 0): 0, (1, 0): 0, (0, 1): 0})
    sk = skeleton(line)
    print(f"tropical line: {len(sk.vertices)} vertex, rays {[r.direction for r in sk.rays]}")
    grid = skeleton(product_family(3, 3))
    print(f"product family (3, 3): b1 = {betti1(grid)}")


if __name__ == "__main__":
    run_examples()
