"""The two unfolding cases and the shared elimination engine."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from ..poly_core import Polynomial, QQ_FIELD, Ring, grevlex_key
from .. import exact_linalg as la
from .. import apolarity as ap
from .. import fixtures_io


@dataclass
class UnfoldCase:
    """Fixed data of one deformation problem.

    kept generators span the tautological ideal in its generation degree;
    the extension generators are the remaining apolar forms vanishing at
    the distinguished point that enter the family J(a).
    """

    tag: str
    pair: ap.DualPair
    quadric: Polynomial
    power: int
    distinguished_var: int            # index of the distinguished y-variable
    point: Tuple[int, ...]
    kept: int
    extension: int
    n_a_vars: int
    n_b_vars: int
    big_ring: Ring                    # y-variables followed by a-parameters
    a_ring: Ring                      # a-parameters only
    j0: List[Polynomial]              # kept generators, in big_ring
    ext: List[Polynomial]             # extension generators, in big_ring
    h0: la.PolyMatrix                 # base syzygies, in big_ring
    a_index: Dict[Tuple[int, int], int]  # (ext i, gen j) -> big_ring var index
    a_names: List[str]
    fixtures_base: Optional[str] = None

    def j_of_a(self) -> List[Polynomial]:
        """The family J(a)_j = J(0)_j + sum_i a_{ij} ext_i in big_ring."""
        out = []
        for j, g in enumerate(self.j0):
            acc = g
            for i, e in enumerate(self.ext):
                acc = acc + self.big_ring.var(self.a_index[(i, j)]) * e
            out.append(acc)
        return out


@dataclass
class SyzygyExtension:
    """Base syzygies, the shape of the t-linear extension, and the solve."""

    h0: la.PolyMatrix
    distinguished_var: int
    solved_u: la.PolyMatrix           # entries linear in a; H(a) = H(0) + t*U(a)

    def h_of_a(self, case: UnfoldCase) -> la.PolyMatrix:
        t = case.big_ring.var(case.distinguished_var)
        rows = []
        for r in range(self.h0.rows):
            rows.append([
                self.h0.entries[r][c] + t * self.solved_u.entries[r][c]
                for c in range(self.h0.cols)
            ])
        return la.PolyMatrix.from_rows(rows, case.big_ring)


@dataclass
class UnfoldResult:
    case: UnfoldCase
    extension_solve: SyzygyExtension
    raw_residuals: List[Polynomial]   # coefficient equations in a only
    linear_basis: List[Polynomial]    # minimal linear generators (RREF)
    quadratic_basis: List[Polynomial]  # minimal quadratic generators mod linear part
    raw_counts: Tuple[int, int]       # (raw equations, nonzero after dedup)
    counts: Tuple[int, int]           # (minimal linear, minimal quadratic)


# ---------------------------------------------------------------------------
# case construction
# ---------------------------------------------------------------------------


def _embed(p: Polynomial, big: Ring) -> Polynomial:
    pad = big.nvars - p.ring.nvars
    return Polynomial(big, {e + (0,) * pad: c for e, c in p.terms.items()})


def ternary_case(fixtures_base: Optional[str] = None) -> UnfoldCase:
    pair = ap.dual_pair(2)
    x = pair.s_ring.gens()
    q = x[0] * x[0] + x[1] * x[2]
    a_names = [f"a{k}" for k in range(21)]
    big = Ring(tuple(pair.t_ring.names) + tuple(a_names), QQ_FIELD)
    a_ring = Ring(tuple(a_names), QQ_FIELD)
    gens = fixtures_io.load_polynomials(
        "ternary/generators_display_order.txt", pair.t_ring, fixtures_base
    )
    h0_small = fixtures_io.load_matrix("ternary/h0.txt", pair.t_ring, fixtures_base)
    j0 = [_embed(g, big) for g in gens[:5]]
    ext = [_embed(g, big) for g in gens[5:]]
    h0 = la.PolyMatrix.from_rows(
        [[_embed(h0_small.entries[i][j], big) for j in range(h0_small.cols)]
         for i in range(h0_small.rows)],
        big,
    ).transpose()  # store syzygies as rows: 4 x 5 with row . J(0) = 0
    # a_k multiplies extension generator (k-1) % ... : column-major layout
    # a0 scales J(0) and is pinned to 1 in the affine chart; a_{5m+1..5m+5}
    # are the coefficients of extension generator m on the five kept gens.
    a_index = {}
    for m in range(4):
        for j in range(5):
            a_index[(m, j)] = big.index(f"a{5 * m + j + 1}")
    return UnfoldCase(
        tag="ternary_cubic",
        pair=pair,
        quadric=q,
        power=3,
        distinguished_var=2,
        point=(0, 0, 1),
        kept=5,
        extension=4,
        n_a_vars=20,
        n_b_vars=20,
        big_ring=big,
        a_ring=a_ring,
        j0=j0,
        ext=ext,
        h0=h0,
        a_index=a_index,
        a_names=a_names,
        fixtures_base=fixtures_base,
    )


def quaternary_case(fixtures_base: Optional[str] = None) -> UnfoldCase:
    pair = ap.dual_pair(3)
    x = pair.s_ring.gens()
    q = x[0] * x[0] - x[1] * x[1] + x[2] * x[3]
    a_names = [f"a{i}{j}" for i in range(5) for j in range(10)]
    big = Ring(tuple(pair.t_ring.names) + tuple(a_names), QQ_FIELD)
    a_ring = Ring(tuple(a_names), QQ_FIELD)
    gens = fixtures_io.load_polynomials(
        "quaternary/apolar_gens_old.txt", pair.t_ring, fixtures_base
    )
    h0_small = fixtures_io.load_matrix("quaternary/h0.txt", pair.t_ring, fixtures_base)
    j0 = [_embed(g, big) for g in gens[:10]]
    ext = [_embed(g, big) for g in gens[10:15]]
    h0 = la.PolyMatrix.from_rows(
        [[_embed(h0_small.entries[i][j], big) for j in range(h0_small.cols)]
         for i in range(h0_small.rows)],
        big,
    )
    a_index = {(i, j): big.index(f"a{i}{j}") for i in range(5) for j in range(10)}
    return UnfoldCase(
        tag="quaternary_square",
        pair=pair,
        quadric=q,
        power=2,
        distinguished_var=3,
        point=(0, 0, 0, 1),
        kept=10,
        extension=5,
        n_a_vars=50,
        n_b_vars=150,
        big_ring=big,
        a_ring=a_ring,
        j0=j0,
        ext=ext,
        h0=h0,
        a_index=a_index,
        a_names=a_names,
        fixtures_base=fixtures_base,
    )


def get_case(tag: str, fixtures_base: Optional[str] = None) -> UnfoldCase:
    if tag == "ternary_cubic":
        return ternary_case(fixtures_base)
    if tag == "quaternary_square":
        return quaternary_case(fixtures_base)
    raise ValueError(f"unknown case {tag!r}")


# ---------------------------------------------------------------------------
# tautological ideals
# ---------------------------------------------------------------------------


def tautological_graded_piece(case: UnfoldCase, d: int) -> List[Polynomial]:
    """Degree-d piece of the homogenized annihilator of the twisted local form.

    A form g lies in the piece iff its dehomogenization at the distinguished
    variable annihilates tw(dehomogenized q^r).
    """
    pair = case.pair
    dist = case.distinguished_var
    f0 = (case.quadric ** case.power).dehomogenize(dist).twist(dist, 2 * case.power)
    t_mons = pair.t_ring.monomials(d)
    field = pair.field
    images = []
    for m in t_mons:
        reduced = m[:dist] + (0,) + m[dist + 1:]
        g = Polynomial(pair.t_ring, {reduced: field.one})
        images.append(ap.contract(pair, g, f0))
    support = sorted({e for img in images for e in img.terms}, key=grevlex_key)
    if not support:
        kernel = [[field.one if i == j else field.zero for j in range(len(t_mons))]
                  for i in range(len(t_mons))]
    else:
        mat = la.polynomials_to_matrix(images, support, field)
        _, kernel = la.rref_kernel(mat.transpose())
    return la.matrix_rows_to_polynomials(kernel, t_mons, pair.t_ring)


def tautological_ideal(case: UnfoldCase) -> ap.GradedIdealView:
    """Ideal generated by the kept generators (equals the homogenized annihilator)."""
    return ap.GradedIdealView(_shrink_all(case.j0, case.pair.t_ring), case.pair.t_ring)


def _shrink(p: Polynomial, small: Ring) -> Polynomial:
    nv = small.nvars
    terms = {}
    for e, c in p.terms.items():
        if any(e[nv:]):
            raise ValueError("polynomial involves parameters; cannot shrink")
        terms[e[:nv]] = c
    return Polynomial(small, terms)


def _shrink_all(polys: Sequence[Polynomial], small: Ring) -> List[Polynomial]:
    return [_shrink(p, small) for p in polys]


# ---------------------------------------------------------------------------
# linear syzygies
# ---------------------------------------------------------------------------


def linear_syzygies(gens: Sequence[Polynomial]) -> List[List[Polynomial]]:
    """Basis of { (l_1..l_k) : sum l_i g_i = 0 } with linear-form entries."""
    if not gens:
        return []
    ring = gens[0].ring
    d = gens[0].total_degree()
    for g in gens:
        if not g.is_homogeneous(d):
            raise ValueError("generators must be homogeneous of equal degree")
    field = ring.field
    target_mons = ring.monomials(d + 1)
    columns = []
    for g in gens:
        for v in range(ring.nvars):
            columns.append(ring.var(v) * g)
    mat = la.polynomials_to_matrix(columns, target_mons, field)
    _, kernel = la.rref_kernel(mat.transpose())
    out = []
    for vec in kernel:
        syz = []
        for k in range(len(gens)):
            coeffs = vec[k * ring.nvars:(k + 1) * ring.nvars]
            terms = {}
            for v, c in enumerate(coeffs):
                if not field.is_zero(c):
                    e = [0] * ring.nvars
                    e[v] = 1
                    terms[tuple(e)] = c
            syz.append(Polynomial(ring, terms))
        out.append(syz)
    return out


# ---------------------------------------------------------------------------
# the elimination engine
# ---------------------------------------------------------------------------


class UnfoldingError(RuntimeError):
    pass


def _leading_mu(case: UnfoldCase) -> List[Tuple[int, ...]]:
    """The unique distinguished-variable-free monomial of each kept generator."""
    dist = case.distinguished_var
    nv_y = case.pair.t_ring.nvars
    mus = []
    for g in case.j0:
        free = [e for e in g.terms if e[dist] == 0]
        if len(free) != 1:
            raise UnfoldingError(
                "kept generator does not have a unique distinguished-free monomial"
            )
        mus.append(free[0][:nv_y])
    if len(set(mus)) != len(mus):
        raise UnfoldingError("leading monomials of kept generators collide")
    for e in case.ext:
        if any(expo[dist] == 0 for expo in e.terms):
            raise UnfoldingError("extension generator not divisible by distinguished var")
    return mus


def solve_extension(case: UnfoldCase) -> SyzygyExtension:
    """Solve the equations linear in the distinguished variable for b = l(a).

    Works with the product H(0) . J(a): the coefficient of mu_k * t in row r
    must cancel against b_{rk} times the unit leading coefficient of J(0)_k.
    Validates that the system is triangular exactly as the leading-monomial
    argument predicts; any other t-linear monomial must have zero coefficient.
    """
    big = case.big_ring
    dist = case.distinguished_var
    nv_y = case.pair.t_ring.nvars
    mus = _leading_mu(case)
    n_pad = big.nvars - nv_y
    units = [case.j0[k].terms[mus[k] + (0,) * n_pad] for k in range(len(mus))]
    j_a = case.j_of_a()
    field = big.field

    u_rows = []
    for r in range(case.h0.rows):
        row_product = big.zero()
        for k in range(case.h0.cols):
            h_entry = case.h0.entries[r][k]
            if h_entry.is_zero():
                continue
            row_product = row_product + h_entry * j_a[k]
        # split by distinguished-variable degree in the y-part
        u_row = [big.zero()] * case.h0.cols
        seen = dict()
        for e, c in row_product.terms.items():
            if e[dist] != 1:
                continue
            y_part = e[:nv_y]
            mu = y_part[:dist] + (0,) + y_part[dist + 1:]
            key = mu
            seen.setdefault(key, {})[e[nv_y:]] = c
        mu_index = {m: k for k, m in enumerate(mus)}
        for mu, a_terms in seen.items():
            if mu not in mu_index:
                raise UnfoldingError(
                    f"t-linear monomial {mu} without a matching b in row {r}"
                )
            k = mu_index[mu]
            # b_{rk} * unit_k + l_{rk}(a) = 0
            poly = Polynomial(big, {
                (0,) * nv_y + ae: c for ae, c in a_terms.items()
            })
            u_row[k] = poly.scale(field.neg(field.inv(field(units[k]))))
        u_rows.append(u_row)
    solved = la.PolyMatrix.from_rows(u_rows, big)
    return SyzygyExtension(h0=case.h0, distinguished_var=dist, solved_u=solved)


def _to_a_ring(p: Polynomial, case: UnfoldCase) -> Polynomial:
    nv_y = case.pair.t_ring.nvars
    terms = {}
    for e, c in p.terms.items():
        if any(e[:nv_y]):
            raise UnfoldingError("residual equation still involves y-variables")
        terms[e[nv_y:]] = c
    return Polynomial(case.a_ring, terms)


def residual_equations(case: UnfoldCase, ext_solve: SyzygyExtension) -> List[Polynomial]:
    """Coefficients (in a) of H(a) . J(a); validates divisibility by t^2."""
    big = case.big_ring
    dist = case.distinguished_var
    nv_y = case.pair.t_ring.nvars
    h_a = ext_solve.h_of_a(case)
    j_a = case.j_of_a()
    residuals: Dict[Tuple[int, ...], Polynomial] = {}
    for r in range(h_a.rows):
        entry = big.zero()
        for k in range(h_a.cols):
            h = h_a.entries[r][k]
            if h.is_zero():
                continue
            entry = entry + h * j_a[k]
        for e, c in entry.terms.items():
            if e[dist] < 2:
                raise UnfoldingError(
                    f"product entry row {r} not divisible by the distinguished "
                    f"variable squared (found t-degree {e[dist]})"
                )
        for mono, coeff_poly in entry.coefficients_in(range(nv_y)).items():
            key = (r,) + mono
            residuals[key] = coeff_poly
    out = []
    for key in sorted(residuals):
        p = _to_a_ring(residuals[key], case)
        if not p.is_zero():
            out.append(p)
    return out


def _span_linear_part(equations: List[Polynomial], ring: Ring) -> List[Polynomial]:
    """Basis of the linear forms inside the linear span of the equations.

    Columns are support-restricted and ordered quadratic part first, so the
    reduced echelon rows with vanishing quadratic block are exactly a basis
    of (span) intersected with (degree <= 1 polynomials).
    """
    field = ring.field
    support = sorted(
        {e for p in equations for e in p.terms},
        key=lambda e: (-sum(e), e),
    )
    if not support:
        return []
    index = {m: i for i, m in enumerate(support)}
    n_quad = sum(1 for m in support if sum(m) >= 2)

    rows = []
    for p in equations:
        row = [field.zero] * len(support)
        for e, c in p.terms.items():
            row[index[e]] = c
        rows.append(row)
    basis = la.row_space_basis(rows, field)
    out = []
    for row in basis:
        if all(field.is_zero(c) for c in row[:n_quad]):
            p = Polynomial.from_terms(ring, dict(zip(support, row)))
            if not p.is_zero():
                if p.total_degree() == 0:
                    raise UnfoldingError("unit found in the residual ideal")
                out.append(p)
    return out


def substitution_from_linear(
    linear_forms: List[Polynomial], ring: Ring
) -> Tuple[Dict[int, Polynomial], List[int]]:
    """Solve independent linear forms for their pivot variables.

    Returns (pivot variable -> expression in the remaining variables,
    list of surviving variable indices).
    """
    field = ring.field
    nv = ring.nvars
    rows = []
    for p in linear_forms:
        row = [field.zero] * nv
        for e, c in p.terms.items():
            row[e.index(1)] = c
        rows.append(row)
    red, pivots = la.rref(la.ScalarMatrix.from_rows(rows, field))
    survivors = [v for v in range(nv) if v not in set(pivots)]
    subs: Dict[int, Polynomial] = {}
    for i, pv in enumerate(pivots):
        expr = ring.zero()
        for v in survivors:
            c = red.entries[i][v]
            if not field.is_zero(c):
                expr = expr - ring.var(v).scale(c)
        subs[pv] = expr
    return subs, survivors


def degree2_content(equations: List[Polynomial], ring: Ring) -> List[Polynomial]:
    """Degree <= 2 content of the ideal generated by degree <= 2 equations.

    Fixpoint of: multiply the current content by 1 and all variables, take
    the span, intersect back with the degree <= 2 subspace (echelon with the
    degree-3 block leading).  Intended for small variable counts.
    """
    field = ring.field
    nv = ring.nvars
    mons = [m for d in (3, 2, 1, 0) for m in ring.monomials(d)]
    index = {m: i for i, m in enumerate(mons)}
    n3 = len(ring.monomials(3))

    def vec(p: Polynomial) -> List[object]:
        row = [field.zero] * len(mons)
        for e, c in p.terms.items():
            row[index[e]] = c
        return row

    def unvec(row) -> Polynomial:
        return Polynomial.from_terms(ring, dict(zip(mons, row)))

    current = la.row_space_basis([vec(p) for p in equations], field)
    current = [r for r in current if all(field.is_zero(c) for c in r[:n3])]
    while True:
        polys = [unvec(r) for r in current]
        prods = [vec(p) for p in polys]
        for p in polys:
            for v in range(nv):
                prods.append(vec(p * ring.var(v)))
        basis = la.row_space_basis(prods, field)
        new = [r for r in basis if all(field.is_zero(c) for c in r[:n3])]
        if len(new) == len(current):
            return [unvec(r) for r in new]
        current = new


def _reduce_to_survivors(
    equations: List[Polynomial], lin: List[Polynomial], ring: Ring
) -> Tuple[List[Polynomial], Ring, List[int]]:
    """Substitute the pivot variables of the linear forms into the equations."""
    field = ring.field
    subs, survivors = substitution_from_linear(lin, ring)
    small = Ring(tuple(ring.names[v] for v in survivors), field)
    to_small = {}
    for v in range(ring.nvars):
        if v in subs:
            expr = subs[v]
            to_small[v] = Polynomial(
                small,
                {tuple(e[s] for s in survivors): c for e, c in expr.terms.items()},
            )
        else:
            to_small[v] = small.var(survivors.index(v))
    reduced = []
    for p in equations:
        q = p.substitute(to_small)
        if not q.is_zero():
            reduced.append(q)
    return reduced, small, survivors


def _minimal_generators(
    equations: List[Polynomial], ring: Ring
) -> Tuple[List[Polynomial], List[Polynomial]]:
    """Minimal linear and quadratic generators of the residual ideal.

    Alternates two moves until stable: extract the linear forms visible in
    the current span and substitute their pivot variables away, then run the
    full degree <= 2 content closure in the surviving (small) variable set.
    Linear forms surfacing in the closure are lifted back and the loop
    repeats, so the final counts do not depend on discovery order.
    """
    field = ring.field
    lin: List[Polynomial] = []
    for _ in range(ring.nvars + 1):
        visible = _span_linear_part(equations, ring) if not lin else []
        if not lin:
            lin = visible
        reduced, small, survivors = _reduce_to_survivors(equations, lin, ring)
        extra = _span_linear_part(reduced, small)
        if not extra:
            content = degree2_content(reduced, small)
            extra = [p for p in content if p.total_degree() < 2]
            if not extra:
                lift = {i: ring.var(v) for i, v in enumerate(survivors)}
                quads = [p.substitute(lift) for p in content]
                lin_poly = [p for p in lin]
                return lin_poly, quads
        lift = {i: ring.var(v) for i, v in enumerate(survivors)}
        lin = lin + [p.substitute(lift) for p in extra]
    raise UnfoldingError("linear-content extraction did not stabilize")


def build_and_eliminate(case: UnfoldCase) -> UnfoldResult:
    ext_solve = solve_extension(case)
    residuals = residual_equations(case, ext_solve)
    distinct = []
    seen = set()
    for p in residuals:
        key = frozenset(p.terms.items())
        if key not in seen:
            seen.add(key)
            distinct.append(p)
    lin, quad = _minimal_generators(distinct, case.a_ring)
    return UnfoldResult(
        case=case,
        extension_solve=ext_solve,
        raw_residuals=residuals,
        linear_basis=lin,
        quadratic_basis=quad,
        raw_counts=(len(residuals), len(distinct)),
        counts=(len(lin), len(quad)),
    )
