"""Verification of the component geometry of the unfolded deformation space.

Quaternary case: the three stated components (a cone over a (2,2,2)
complete intersection and two 3-planes) are checked by degreewise
containment of the residual ideal, dimension sanity, and sample points
that must produce honest apolar ideals (full syzygy count + Hilbert
function of the tautological scheme).  Ternary case: sample points on
the singular curve, the tangent line at the base point, and generic
tangent lines of the derived surface are put through the same battery.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..poly_core import Polynomial, QQ_FIELD, Ring, parse_polynomial
from .. import exact_linalg as la
from .. import apolarity as ap
from .. import fixtures_io
from .cases import (
    UnfoldCase,
    UnfoldResult,
    build_and_eliminate,
    linear_syzygies,
    substitution_from_linear,
    tautological_ideal,
)


@dataclass
class SubCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ComponentReport:
    case: str
    checks: List[SubCheck] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(SubCheck(name, bool(ok), detail))

    def failures(self) -> List[str]:
        return [f"{c.name}: {c.detail}" for c in self.checks if not c.ok]


COORDS8 = ("a12", "a13", "a20", "a21", "a22", "a23", "a42", "a43")

# coordinates negated by the involution that swaps the two rulings of the
# inverse quadric (y1 -> -y1 upstairs)
IOTA_FLIPPED = ("a12", "a21", "a23", "a42")


def coords8_ring() -> Ring:
    return Ring(COORDS8, QQ_FIELD)


def ruling_involution(ring8: Ring) -> Dict[int, Polynomial]:
    images = {}
    for n in COORDS8:
        v = ring8.var(n)
        images[ring8.index(n)] = -v if n in IOTA_FLIPPED else v
    return images


def load_a5_substitution(base: Optional[str] = None) -> la.PolyMatrix:
    return fixtures_io.load_matrix("quaternary/a5_substitution.txt", coords8_ring(), base)


def full_parameters_from_coords8(
    case: UnfoldCase, a5: la.PolyMatrix, point: Sequence[Fraction]
) -> Dict[Tuple[int, int], Fraction]:
    """Evaluate the substitution matrix at a point of the reduced space."""
    values: Dict[Tuple[int, int], Fraction] = {}
    for j in range(10):
        for i in range(5):
            values[(i, j)] = a5.entries[j][i].evaluate(point)
    return values


def generators_at_point(
    case: UnfoldCase, values: Dict[Tuple[int, int], Fraction]
) -> List[Polynomial]:
    """J(a) over QQ at a concrete parameter point."""
    ring = case.pair.t_ring
    j0 = []
    for j, g in enumerate(case.j0):
        small = Polynomial(ring, {e[: ring.nvars]: c for e, c in g.terms.items()})
        acc = small
        for i, ext in enumerate(case.ext):
            v = values.get((i, j), Fraction(0))
            if v:
                ext_small = Polynomial(ring, {e[: ring.nvars]: c for e, c in ext.terms.items()})
                acc = acc + ext_small.scale(v)
        j0.append(acc)
    return j0


def check_sample_point(
    case: UnfoldCase,
    values: Dict[Tuple[int, int], Fraction],
    expected_syzygies: int,
    expected_hilbert: List[int],
) -> Tuple[bool, str]:
    """Apolarity + syzygy count + Hilbert function for one parameter point."""
    gens = generators_at_point(case, values)
    f = case.quadric ** case.power
    for g in gens:
        if not ap.contract(case.pair, g, f).is_zero():
            return False, "generator not apolar at sample point"
    syz = linear_syzygies(gens)
    if len(syz) != expected_syzygies:
        return False, f"expected {expected_syzygies} linear syzygies, got {len(syz)}"
    ideal = ap.GradedIdealView(gens, case.pair.t_ring)
    h = ap.hilbert_function(ideal, len(expected_hilbert) - 1)
    if h != expected_hilbert:
        return False, f"Hilbert function {h} != {expected_hilbert}"
    return True, ""


# ---------------------------------------------------------------------------
# quaternary component data
# ---------------------------------------------------------------------------


def _subst_to_coords8(p: Polynomial, a5: la.PolyMatrix, case: UnfoldCase) -> Polynomial:
    """Push a polynomial in the 50 parameters to the eight coordinates."""
    ring8 = a5.ring
    images = {}
    for i in range(5):
        for j in range(10):
            images[case.a_ring.index(f"a{i}{j}")] = a5.entries[j][i]
    return p.substitute(images)


def _component_params_linear(
    linear_forms: List[Polynomial], ring8: Ring
) -> Tuple[Dict[int, Polynomial], List[int]]:
    """Parameterize a linear component by its surviving coordinates."""
    subs, survivors = substitution_from_linear(linear_forms, ring8)
    images = {}
    for v in range(ring8.nvars):
        images[v] = subs[v] if v in subs else ring8.var(v)
    return images, survivors


def _vanishes_on_linear_component(
    p: Polynomial, linear_forms: List[Polynomial], ring8: Ring
) -> bool:
    images, _ = _component_params_linear(linear_forms, ring8)
    return p.substitute(images).is_zero()


def _c0_points(
    minor_matrix: la.PolyMatrix, quadrics: List[Polynomial], ring8: Ring, count: int = 3
) -> List[List[Fraction]]:
    """Rational points on the singular curve of component 0.

    Brute-force over the row-proportionality factor of the 2 x 5 minor
    matrix: for each candidate factor the minor conditions become linear,
    and the kernel supplies candidate points, which are then verified
    against every 2 x 2 minor and the three component quadrics.
    """
    field = ring8.field
    six = [ring8.index(n) for n in ("a12", "a13", "a20", "a21", "a22", "a23")]
    found: List[List[Fraction]] = []
    candidates = [Fraction(n, d) for n in range(1, 6) for d in (1, 2)]
    for t in candidates:
        # row2 - t*row1 entries are linear forms in the six coordinates
        rows = []
        for c in range(minor_matrix.cols):
            diff = minor_matrix.entries[1][c] - minor_matrix.entries[0][c].scale(t)
            row = [field.zero] * len(six)
            for e, coeff in diff.terms.items():
                row[six.index(e.index(1))] = coeff
            rows.append(row)
        _, kernel = la.rref_kernel(la.ScalarMatrix.from_rows(rows, field))
        for vec in kernel:
            point = [field.zero] * ring8.nvars
            for idx, v in zip(six, vec):
                point[idx] = v
            minors_ok = all(
                m.evaluate(point).numerator == 0
                for m in la.minors(minor_matrix, 2)
            )
            quadrics_ok = all(q.evaluate(point) == 0 for q in quadrics)
            if minors_ok and quadrics_ok and any(v != 0 for v in point):
                found.append(point)
                if len(found) >= count:
                    return found
    return found


def _quadric_membership_comp0(
    q: Polynomial,
    comp0_quadrics: List[Polynomial],
    ring8: Ring,
) -> bool:
    """Degree-2 membership in (a42, a43) + (three quadrics)."""
    field = ring8.field
    mons2 = ring8.monomials(2)
    span_polys = list(comp0_quadrics)
    for name in ("a42", "a43"):
        lv = ring8.var(name)
        for v in range(ring8.nvars):
            span_polys.append(lv * ring8.var(v))
    span = [la.polynomials_to_matrix([p], mons2, field).entries[0] for p in span_polys]
    vec = la.polynomials_to_matrix([q], mons2, field).entries[0]
    return la.span_contains(span, vec, field)


def verify_components_quaternary(
    case: UnfoldCase, result: UnfoldResult, base: Optional[str] = None
) -> ComponentReport:
    report = ComponentReport(case="quaternary_square")
    ring8 = coords8_ring()
    a5 = load_a5_substitution(base)
    comp0_quadrics = fixtures_io.load_polynomials("quaternary/comp0_quadrics.txt", ring8, base)
    comp0_linear = fixtures_io.load_polynomials("quaternary/comp0_linear.txt", ring8, base)
    comp1_linear = fixtures_io.load_polynomials("quaternary/comp1_linear.txt", ring8, base)
    comp2_linear = fixtures_io.load_polynomials("quaternary/comp2_linear.txt", ring8, base)
    c0_matrix = fixtures_io.load_matrix("quaternary/c0_minor_matrix.txt", ring8, base)

    # the substitution map must kill every linear generator of the ideal
    killed = all(
        _subst_to_coords8(p, a5, case).is_zero() for p in result.linear_basis
    )
    report.add("substitution-kills-linear-part", killed)

    # push the quadratic generators to the eight coordinates
    pushed = [_subst_to_coords8(p, a5, case) for p in result.quadratic_basis]
    homogeneous = all(p.is_zero() or p.is_homogeneous(2) for p in pushed)
    report.add("substituted-quadrics-homogeneous", homogeneous)
    mons2 = ring8.monomials(2)

    def vecs(polys: Sequence[Polynomial]) -> List[List[object]]:
        return [la.polynomials_to_matrix([p], mons2, ring8.field).entries[0]
                for p in polys if not p.is_zero()]

    # the ruling-swap involution fixes the pushed quadric span and maps
    # the first special component onto the second (this re-derives the
    # corrected last linear form of component 2)
    iota = ruling_involution(ring8)
    pushed_span = vecs(pushed)
    report.add(
        "involution-fixes-unfold-quadrics",
        la.spans_equal(pushed_span, vecs([p.substitute(iota) for p in pushed]), ring8.field),
    )
    comp2_derived = [p.substitute(iota) for p in comp1_linear]
    report.add(
        "component2-is-involution-image",
        la.spans_equal(
            _lin_rows(comp2_derived, ring8), _lin_rows(comp2_linear, ring8), ring8.field
        ),
    )

    # degreewise containment of the residual ideal in every component ideal
    comp0_ok = all(_quadric_membership_comp0(p, comp0_quadrics, ring8) for p in pushed)
    report.add("containment-component0", comp0_ok)
    for name, forms in (("component1", comp1_linear), ("component2", comp2_linear)):
        ok = all(_vanishes_on_linear_component(p, forms, ring8) for p in pushed)
        report.add(f"containment-{name}", ok)

    # the stated radical shape: quadrics vanishing on all three components
    # form a 12-dimensional space containing the pushed quadrics
    ideal0_deg2 = list(comp0_quadrics)
    for n in ("a42", "a43"):
        for v in range(ring8.nvars):
            ideal0_deg2.append(ring8.var(n) * ring8.var(v))

    def _lin_ideal_deg2(forms: Sequence[Polynomial]) -> List[Polynomial]:
        return [f * ring8.var(v) for f in forms for v in range(ring8.nvars)]

    radical2 = la.intersect_row_spaces(
        vecs(ideal0_deg2), vecs(_lin_ideal_deg2(comp1_linear)), ring8.field
    )
    radical2 = la.intersect_row_spaces(
        radical2, vecs(_lin_ideal_deg2(comp2_linear)), ring8.field
    )
    report.add("radical-quadrics-dimension-12", len(radical2) == 12, f"dim {len(radical2)}")
    report.add(
        "unfold-quadrics-inside-radical",
        all(la.span_contains(radical2, v, ring8.field) for v in pushed_span),
        f"pushed span dim {la.span_dim(pushed_span, ring8.field)} of 12",
    )

    # dimension sanity
    def _lin_rank(forms: List[Polynomial]) -> int:
        rows = []
        for p in forms:
            row = [ring8.field.zero] * ring8.nvars
            for e, c in p.terms.items():
                row[e.index(1)] = c
            rows.append(row)
        return la.rank(la.ScalarMatrix.from_rows(rows, ring8.field))

    report.add("component1-dimension", _lin_rank(comp1_linear) == 5, "codim 5 in A^8")
    report.add("component2-dimension", _lin_rank(comp2_linear) == 5, "codim 5 in A^8")
    q_dim = la.span_dim(
        [la.polynomials_to_matrix([p], mons2, ring8.field).entries[0] for p in comp0_quadrics],
        ring8.field,
    )
    report.add(
        "component0-dimension",
        _lin_rank(comp0_linear) == 2 and q_dim == 3,
        "2 linear + 3 independent quadrics",
    )

    # sample points on the two linear components
    taut_h = ap.hilbert_function(tautological_ideal(case), 7)
    for name, forms in (("component1", comp1_linear), ("component2", comp2_linear)):
        images, survivors = _component_params_linear(forms, ring8)
        for sample in ((1, 2, 3), (2, -1, 5), (-3, 1, 1)):
            point = [Fraction(0)] * ring8.nvars
            for v, s in zip(survivors, sample):
                point[v] = Fraction(s)
            full = [images[v].evaluate(point) for v in range(ring8.nvars)]
            values = full_parameters_from_coords8(case, a5, full)
            ok, msg = check_sample_point(case, values, 15, taut_h)
            report.add(f"sample-{name}-{sample}", ok, msg)
            if not ok:
                break

    # sample points on the singular curve of component 0
    points = _c0_points(c0_matrix, comp0_quadrics, ring8)
    report.add("c0-search-found-points", len(points) >= 2, f"{len(points)} points")
    for k, point in enumerate(points):
        values = full_parameters_from_coords8(case, a5, point)
        ok, msg = check_sample_point(case, values, 15, taut_h)
        report.add(f"sample-component0-{k}", ok, msg)

    _supportonline_checks(report, ring8, a5, case, comp0_quadrics, comp1_linear, base)
    return report


def _supportonline_checks(
    report: ComponentReport,
    ring8: Ring,
    a5: la.PolyMatrix,
    case: UnfoldCase,
    comp0_quadrics: List[Polynomial],
    comp1_linear: List[Polynomial],
    base: Optional[str],
) -> None:
    """The restriction-to-a-line argument for component 0.

    Restricted to either line of the inverse quadric through the base
    point, the first four deformed generators become c_k s^3 + d_k s^2 w;
    a common zero away from the base point forces the ratios d_k / c_k to
    agree.  The resulting difference ideal and its interplay with the
    component-0 quadrics are checked against the stated forms.
    """
    field = ring8.field
    ring = case.pair.t_ring
    # J(a) rows 0..3 with the a42 = a43 = 0 specialization of the matrix
    kill = {ring8.index("a42"): ring8.zero(), ring8.index("a43"): ring8.zero()}
    lines = {
        "minus": (1, 1),   # y0 = s, y1 = s  (the line y2 = y0 - y1 = 0)
        "plus": (1, -1),   # y0 = s, y1 = -s (the line y2 = y0 + y1 = 0)
    }
    stated_three = [
        parse_polynomial("a20-3a21+3a22-a23", ring8),
        parse_polynomial("9a13-7a21+26a22-a23", ring8),
        parse_polynomial("9a12+5a21+20a22-7a23", ring8),
    ]
    stated_square = parse_polynomial("a21-2a22+a23", ring8)
    iota = ruling_involution(ring8)

    for tag, (s0, s1) in lines.items():
        if tag == "minus":
            expected_three, square_form = stated_three, stated_square
        else:
            # the source only displays the forms for the first line; the
            # second line carries their involution images
            expected_three = [p.substitute(iota) for p in stated_three]
            square_form = stated_square.substitute(iota)
        diffs = []
        base_c = None
        base_d = None
        for j in range(4):
            # restrict generator j: substitute y0 = s0*u, y1 = s1*u, y2 = 0, y3 = w
            small_j0 = Polynomial(ring, {e[: ring.nvars]: c2 for e, c2 in case.j0[j].terms.items()})
            exts = [Polynomial(ring, {e[: ring.nvars]: c2 for e, c2 in ext.terms.items()})
                    for ext in case.ext]

            def restrict(p: Polynomial) -> Tuple[Fraction, Fraction]:
                # returns coefficients of (u^3, u^2 w) after the substitution
                cu3 = Fraction(0)
                cu2w = Fraction(0)
                for e, coeff in p.terms.items():
                    if e[2] != 0:
                        continue
                    val = coeff * Fraction(s0) ** e[0] * Fraction(s1) ** e[1]
                    if e[3] == 0:
                        cu3 += val
                    elif e[3] == 1:
                        cu2w += val
                return cu3, cu2w

            c_k, _ = restrict(small_j0)
            d_poly = ring8.zero()
            for i, ext in enumerate(exts):
                _, dv = restrict(ext)
                if dv:
                    coeff_poly = a5.entries[j][i].substitute(kill)
                    d_poly = d_poly + coeff_poly.scale(dv)
            if j == 0:
                base_c, base_d = c_k, d_poly
            else:
                diffs.append(d_poly.scale(base_c) - base_d.scale(c_k))
        span_ok = la.spans_equal(
            _lin_rows(diffs, ring8), _lin_rows(expected_three, ring8), field
        )
        report.add(f"supportonline-{tag}-difference-span", span_ok)

        # substituting the three difference forms into the component quadrics
        # leaves exactly the square of the stated linear form
        images, survivors = _component_params_linear(expected_three, ring8)
        target = square_form.substitute(images)
        reduced = [q.substitute(images) for q in comp0_quadrics]
        mons = ring8.monomials(2)
        span = [la.polynomials_to_matrix([target * target], mons, field).entries[0]]
        inside = all(
            la.span_contains(span, la.polynomials_to_matrix([r], mons, field).entries[0], field)
            for r in reduced
        )
        nonzero = any(not r.is_zero() for r in reduced)
        report.add(f"supportonline-{tag}-square-form", inside and nonzero)

    # the three difference forms lie in the span of the four stated forms
    four = [p for p in comp1_linear if p.total_degree() == 1][1:]  # drop a42-a43
    span_ok = all(
        la.span_contains(_lin_rows(four, ring8), row, ring8.field)
        for row in _lin_rows(stated_three, ring8)
    )
    report.add("supportonline-three-in-four", span_ok)
    # row-sum identity: a12+2a13+6a22 = (1/3)(3a12+10a22-4a23)+(2/3)(3a13+4a22+2a23)
    lhs = parse_polynomial("a12+2a13+6a22", ring8)
    rhs = (parse_polynomial("3a12+10a22-4a23", ring8).scale(Fraction(1, 3))
           + parse_polynomial("3a13+4a22+2a23", ring8).scale(Fraction(2, 3)))
    report.add("supportonline-rowsum-identity", lhs == rhs)


def _lin_rows(polys: Sequence[Polynomial], ring: Ring) -> List[List[object]]:
    field = ring.field
    rows = []
    for p in polys:
        row = [field.zero] * ring.nvars
        for e, c in p.terms.items():
            row[e.index(1)] = c
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# ternary sampling
# ---------------------------------------------------------------------------


def ternary_full_parameters(
    case: UnfoldCase, result: UnfoldResult, survivor_values: Dict[str, Fraction]
) -> Dict[Tuple[int, int], Fraction]:
    """Complete a point given on the nine surviving coordinates.

    Uses the derived twelve linear relations to fill in the eliminated
    parameters, then maps the flat a-numbering back to (extension, generator)
    indices.
    """
    ring = case.a_ring
    subs, survivors = substitution_from_linear(result.linear_basis, ring)
    point = [Fraction(0)] * ring.nvars
    for name, v in survivor_values.items():
        point[ring.index(name)] = Fraction(v)
    full = []
    for v in range(ring.nvars):
        full.append(subs[v].evaluate(point) if v in subs else point[v])
    values: Dict[Tuple[int, int], Fraction] = {}
    for (i, j), idx in case.a_index.items():
        # a_index maps into big_ring; convert back to the a-only index
        name = case.big_ring.names[idx]
        values[(i, j)] = full[ring.index(name)]
    return values


def verify_components_ternary(
    case: UnfoldCase, result: UnfoldResult, base: Optional[str] = None
) -> ComponentReport:
    """Sample the derived surface: singular curve, tangent line, tangent planes."""
    report = ComponentReport(case="ternary_cubic")
    ring = Ring(("t",), QQ_FIELD)
    c_param = fixtures_io.load_polynomials("ternary/c_param.txt", ring, base)
    names = ("a0", "a20", "a19", "a18", "a17", "a16", "a11", "a6", "a1")
    taut_h = ap.hilbert_function(tautological_ideal(case), 7)

    def curve_point(t: Fraction) -> Dict[str, Fraction]:
        return {n: p.evaluate([t]) for n, p in zip(names, c_param)}

    def tangent_point(t: Fraction, v: Fraction) -> Dict[str, Fraction]:
        vals = {}
        for n, p in zip(names, c_param):
            vals[n] = p.evaluate([t]) + v * p.differentiate(0).evaluate([t])
        return vals

    quadrics = result.quadratic_basis

    def on_surface(values: Dict[str, Fraction]) -> bool:
        ring_a = case.a_ring
        point = [Fraction(0)] * ring_a.nvars
        for n, v in values.items():
            point[ring_a.index(n)] = v
        return all(q.evaluate(point) == 0 for q in quadrics)

    for t in (Fraction(1), Fraction(2), Fraction(-1, 2)):
        values = curve_point(t)
        ok_surface = on_surface(values)
        vals_affine = dict(values)
        scale = vals_affine.pop("a0")
        assert scale == 1
        params = ternary_full_parameters(case, result, vals_affine)
        ok, msg = check_sample_point(case, params, 4, taut_h)
        report.add(f"sample-curve-t={t}", ok_surface and ok, msg)

    # the tangent line at the base point: only a20 nonzero
    for a20 in (Fraction(1), Fraction(-3)):
        ok_surface = on_surface({"a0": Fraction(1), "a20": a20})
        params = ternary_full_parameters(case, result, {"a20": a20})
        ok, msg = check_sample_point(case, params, 4, taut_h)
        report.add(f"sample-tangent-at-base-a20={a20}", ok_surface and ok, msg)

    # generic tangent-line (developable) points
    for t, v in ((Fraction(1), Fraction(2)), (Fraction(-1), Fraction(1, 3))):
        values = tangent_point(t, v)
        ok_surface = on_surface(values)
        vals_affine = dict(values)
        a0 = vals_affine.pop("a0")
        assert a0 == 1
        params = ternary_full_parameters(case, result, vals_affine)
        ok, msg = check_sample_point(case, params, 4, taut_h)
        report.add(f"sample-developable-t={t}-v={v}", ok_surface and ok, msg)

    return report


def verify_components(
    case: UnfoldCase, result: Optional[UnfoldResult] = None, base: Optional[str] = None
) -> ComponentReport:
    if result is None:
        result = build_and_eliminate(case)
    if case.tag == "quaternary_square":
        return verify_components_quaternary(case, result, base)
    return verify_components_ternary(case, result, base)
