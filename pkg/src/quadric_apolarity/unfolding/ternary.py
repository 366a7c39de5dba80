"""Geometry of the ternary deformation surface.

Checks: the degree-8 parameterization of the singular curve against the
minor equations and the residual quadrics, the tangent line at the base
point, the degree-20 rational normal curve obtained from the 5 x 5 minors
of the parameterized coefficient matrix, and the two-component
decomposition of the deformed schemes along a tangent line.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..poly_core import Polynomial, QQ_FIELD, Ring, parse_polynomial, grevlex_key
from .. import exact_linalg as la
from .. import apolarity as ap
from .. import fixtures_io
from .cases import (
    UnfoldCase,
    UnfoldResult,
    build_and_eliminate,
    substitution_from_linear,
    ternary_case,
)
from .components import ComponentReport, SubCheck

T_RING = Ring(("t",), QQ_FIELD)
PARAM_NAMES = ("a0", "a20", "a19", "a18", "a17", "a16", "a11", "a6", "a1")


def curve_parameterization(base: Optional[str] = None) -> Dict[str, Polynomial]:
    polys = fixtures_io.load_polynomials("ternary/c_param.txt", T_RING, base)
    return dict(zip(PARAM_NAMES, polys))


def full_curve_in_t(
    case: UnfoldCase, result: UnfoldResult, base: Optional[str] = None
) -> List[Polynomial]:
    """All 21 parameters as polynomials in t (survivors from the fixture,
    eliminated ones through the derived linear relations)."""
    ring = case.a_ring
    param = curve_parameterization(base)
    subs, survivors = substitution_from_linear(result.linear_basis, ring)
    survivor_polys: Dict[int, Polynomial] = {}
    for name, poly in param.items():
        survivor_polys[ring.index(name)] = poly
    full = []
    for v in range(ring.nvars):
        if v in subs:
            expr = subs[v]
            acc = T_RING.zero()
            for e, c in expr.terms.items():
                w = e.index(1)
                acc = acc + survivor_polys[w].scale(c)
            full.append(acc)
        else:
            full.append(survivor_polys[v])
    return full


def d_matrix_in_t(case: UnfoldCase, full_params: List[Polynomial]) -> la.PolyMatrix:
    """D(t) = (a0*I5 | F(t)) with F filled column-major by a1..a20."""
    ring = case.a_ring
    a_of = {name: full_params[ring.index(name)] for name in ring.names}
    rows = []
    for i in range(5):
        row = [T_RING.zero()] * 5
        row[i] = a_of["a0"]
        for m in range(4):
            row.append(a_of[f"a{5 * m + i + 1}"])
        rows.append(row)
    return la.PolyMatrix.from_rows(rows, T_RING)


def gamma_generators(case: UnfoldCase, s: Fraction, t: Fraction) -> List[Polynomial]:
    """The five quartics of the deformed scheme over [s : t] on the tangent line."""
    ring = case.pair.t_ring
    gens = fixtures_io.load_polynomials(
        "ternary/generators_display_order.txt", ring, case.fixtures_base
    )
    out = list(gens[:4])
    out.append(gens[4].scale(t) + gens[8].scale(s))
    return out


def local_apolar_piece(pair: ap.DualPair, f_local: Polynomial, dist: int, d: int) -> List[Polynomial]:
    """Degree-d piece of the homogenized annihilator of a local polynomial."""
    t_mons = pair.t_ring.monomials(d)
    field = pair.field
    images = []
    for m in t_mons:
        reduced = m[:dist] + (0,) + m[dist + 1:]
        g = Polynomial(pair.t_ring, {reduced: field.one})
        images.append(ap.contract(pair, g, f_local))
    support = sorted({e for img in images for e in img.terms}, key=grevlex_key)
    if not support:
        return la.matrix_rows_to_polynomials(
            [[field.one if i == j else field.zero for j in range(len(t_mons))]
             for i in range(len(t_mons))],
            t_mons, pair.t_ring,
        )
    mat = la.polynomials_to_matrix(images, support, field)
    _, kernel = la.rref_kernel(mat.transpose())
    return la.matrix_rows_to_polynomials(kernel, t_mons, pair.t_ring)


def ternary_geometry_checks(
    case: Optional[UnfoldCase] = None,
    result: Optional[UnfoldResult] = None,
    base: Optional[str] = None,
) -> ComponentReport:
    if case is None:
        case = ternary_case(base)
    if result is None:
        result = build_and_eliminate(case)
    report = ComponentReport(case="ternary_geometry")
    ring = case.a_ring
    field = ring.field

    # (1) the curve parameterization satisfies the minor equations and quadrics
    minor_matrix = fixtures_io.load_matrix("ternary/c_minor_matrix.txt", ring, base)
    full_params = full_curve_in_t(case, result, base)

    def at_t(p: Polynomial) -> Polynomial:
        images = {v: full_params[v] for v in range(ring.nvars)}
        return p.substitute(images)

    minors_vanish = all(at_t(m).is_zero() for m in la.minors(minor_matrix, 2))
    report.add("curve-satisfies-2x8-minors", minors_vanish)
    quadrics_vanish = all(at_t(q).is_zero() for q in result.quadratic_basis)
    report.add("curve-satisfies-15-quadrics", quadrics_vanish)
    a1_poly = curve_parameterization(base)["a1"]
    report.add(
        "curve-a1-at-t=1",
        a1_poly.evaluate([1]) == Fraction(7, 5120000000),
        str(a1_poly.evaluate([1])),
    )

    # (2) the line L0 lies on the quadrics and is tangent to the curve at J(0)
    l0_zero = {ring.index(n): ring.zero()
               for n in ("a1", "a6", "a11", "a16", "a17", "a18", "a19")}
    on_line = all(q.substitute(l0_zero).is_zero() for q in result.quadratic_basis)
    report.add("line-L0-on-quadrics", on_line)
    valuations_ok = True
    for name, poly in curve_parameterization(base).items():
        val = min((e[0] for e in poly.terms), default=99)
        expected = {"a0": 0, "a20": 1}.get(name)
        if expected is not None:
            valuations_ok &= val == expected
        else:
            valuations_ok &= val >= 2
    report.add("line-L0-tangent-at-base", valuations_ok,
               "curve = base point + t * (a20 direction) + O(t^2)")

    # (3) the 5x5 minors of D(t): degree <= 20, coefficient rank exactly 21
    derived_d = d_matrix_in_t(case, full_params)
    fixture_d = fixtures_io.load_matrix("ternary/d_matrix.txt", T_RING, base)
    same = all(
        derived_d.entries[i][j] == fixture_d.entries[i][j]
        for i in range(5) for j in range(9)
    )
    report.add("D-matrix-fixture-matches-derivation", same)
    minors5 = la.minors(derived_d, 5)
    report.add("D-minor-count", len(minors5) == 126, str(len(minors5)))
    max_deg = max(m.total_degree() for m in minors5)
    report.add("D-minors-max-degree-20", max_deg == 20, f"max degree {max_deg}")
    coeff_rows = []
    for m in minors5:
        row = [field.zero] * 21
        for e, c in m.terms.items():
            row[e[0]] = c
        coeff_rows.append(row)
    rank = la.rank(la.ScalarMatrix.from_rows(coeff_rows, field))
    report.add("D-minor-coefficient-rank-21", rank == 21, f"rank {rank}")

    # (4) decomposition of the deformed schemes along the tangent line
    _gamma_decomposition_checks(case, report, base)
    return report


def _gamma_decomposition_checks(
    case: UnfoldCase, report: ComponentReport, base: Optional[str]
) -> None:
    pair = case.pair
    ring = pair.t_ring
    q3 = case.quadric ** case.power

    for s, t in ((Fraction(1), Fraction(1)), (Fraction(1), Fraction(2)),
                 (Fraction(2), Fraction(1)), (Fraction(1), Fraction(-1))):
        gens = gamma_generators(case, s, t)
        apolar = all(ap.contract(pair, g, q3).is_zero() for g in gens)
        report.add(f"gamma-[{s}:{t}]-apolar", apolar)

        gamma = ap.GradedIdealView(gens, ring)
        # the point component V(y1, t*y0 + s*y2)
        point_ideal = ap.GradedIdealView(
            [ring.var("y1"), ring.var("y0").scale(t) + ring.var("y2").scale(s)], ring
        )
        # the local length-9 component
        y0, y1, y2 = ring.gens()
        cubic = (
            (y0 ** 3).scale(s ** 3)
            - (y0 ** 2 * y1).scale(9 * s ** 2 * t)
            + (y0 * y1 ** 2).scale(21 * s * t ** 2)
            - (y1 ** 3).scale(14 * t ** 3)
            - (y0 * y1 * y2).scale(3 * s ** 3)
            + (y1 ** 2 * y2).scale(6 * s ** 2 * t)
        )
        gens9 = [cubic, y1 ** 4, y0 * y1 ** 3,
                 (y0 ** 2 * y1 ** 2).scale(3) - (y1 ** 3 * y2).scale(2)]
        gamma9 = ap.GradedIdealView(gens9, ring)

        inter_ok = True
        for d in range(4, 8):
            inter = la.intersect_row_spaces(
                point_ideal.graded_piece(d), gamma9.graded_piece(d), ring.field
            )
            if inter != gamma.graded_piece(d):
                inter_ok = False
        report.add(f"gamma-[{s}:{t}]-decomposition-degrees-4-7", inter_ok)

        h9 = ap.hilbert_function(gamma9, 7)
        report.add(
            f"gamma-[{s}:{t}]-length9-hilbert",
            h9 == [1, 3, 6, 9, 9, 9, 9, 9],
            str(h9),
        )

        # the length-9 part is the homogenized annihilator of the stated
        # local polynomial
        x0, x1, _ = pair.s_ring.gens()
        f_loc = (
            (x0 ** 6).scale(3 * s ** 2)
            + (x0 ** 4 * x1).scale(30 * s ** 2)
            - (x0 ** 3 * x1).scale(280 * s * t)
            + (x0 ** 2 * x1 ** 2).scale(60 * s ** 2)
            + (x0 ** 2 * x1).scale(2800 * t ** 2)
            - (x0 * x1 ** 2).scale(280 * s * t)
            + (x1 ** 3).scale(60 * s ** 2)
            + (x1 ** 2).scale(5600 * t ** 2)
        )
        local_ok = True
        for d in range(3, 8):
            piece = local_apolar_piece(pair, f_loc, 2, d)
            rows = [la.polynomials_to_matrix([p], ring.monomials(d), ring.field).entries[0]
                    for p in piece]
            if la.row_space_basis(rows, ring.field) != gamma9.graded_piece(d):
                local_ok = False
        report.add(f"gamma-[{s}:{t}]-length9-local-annihilator", local_ok)

    # point-evaluation example: the [1:1] point component evaluates to zero
    gens = gamma_generators(case, Fraction(1), Fraction(1))
    point = (1, 0, -1)
    report.add(
        "gamma-[1:1]-point-on-generators",
        all(g.evaluate(point) == 0 for g in gens),
    )
