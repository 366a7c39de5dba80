"""Apolarity pairing and everything built on it.

The dual pair (S in x-variables, T in y-variables) is contracted by letting
y_i act as d/dx_i with no combinatorial prefactors.  On top of the pairing:
graded pieces of apolar ideals, catalecticant matrices, Hilbert functions,
cactus/AH rank bounds, inverse quadrics, higher-order polarity (q_l, q_f,
inverse quartics) and the two explicit rank-eleven certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, ceil
from typing import Dict, List, Optional, Sequence, Tuple

from .poly_core import Field, Polynomial, QQ_FIELD, Ring
from . import exact_linalg as la


@dataclass(frozen=True)
class DualPair:
    """Polynomial ring S (forms) and its dual T (operators), same length."""

    s_ring: Ring
    t_ring: Ring

    def __post_init__(self):
        if self.s_ring.nvars != self.t_ring.nvars:
            raise ValueError("S and T must have the same number of variables")
        if self.s_ring.field != self.t_ring.field:
            raise ValueError("S and T must share the coefficient field")

    @property
    def field(self) -> Field:
        return self.s_ring.field


def dual_pair(n: int, field: Field = QQ_FIELD, x: str = "x", y: str = "y") -> DualPair:
    """Standard dual pair in n+1 variables x0..xn / y0..yn."""
    s = Ring(tuple(f"{x}{i}" for i in range(n + 1)), field)
    t = Ring(tuple(f"{y}{i}" for i in range(n + 1)), field)
    return DualPair(s, t)


def contract(pair: DualPair, g: Polynomial, f: Polynomial) -> Polynomial:
    """Apply g(d/dx) to f; linear in both arguments."""
    if g.ring != pair.t_ring or f.ring != pair.s_ring:
        raise ValueError("contract expects (operator in T, form in S)")
    result = pair.s_ring.zero()
    for expo, coeff in g.terms.items():
        part = f
        for i, k in enumerate(expo):
            for _ in range(k):
                if part.is_zero():
                    break
                part = part.differentiate(i)
        if not part.is_zero():
            result = result + part.scale(coeff)
    return result


def catalecticant(pair: DualPair, f: Polynomial, a: int) -> la.ScalarMatrix:
    """Matrix of T_a -> S_{d-a}, g |-> g(f), in grevlex monomial bases."""
    if not f.is_homogeneous():
        raise ValueError("catalecticant needs a homogeneous form")
    d = f.total_degree()
    if a > d:
        raise ValueError(f"operator degree {a} exceeds form degree {d}")
    t_mons = pair.t_ring.monomials(a)
    s_mons = pair.s_ring.monomials(d - a)
    field = pair.field
    col_index = {m: j for j, m in enumerate(t_mons)}
    mat = la.ScalarMatrix.zero(len(s_mons), len(t_mons), field)
    row_index = {m: i for i, m in enumerate(s_mons)}
    for tm in t_mons:
        g = Polynomial(pair.t_ring, {tm: field.one})
        image = contract(pair, g, f)
        j = col_index[tm]
        for e, c in image.terms.items():
            mat.entries[row_index[e]][j] = c
    return mat


def apolar_graded(pair: DualPair, f: Polynomial, d: int) -> List[Polynomial]:
    """Basis of (f-perp)_d as forms in T_d (kernel of the catalecticant)."""
    deg = f.total_degree()
    t_mons = pair.t_ring.monomials(d)
    if d > deg:
        return [Polynomial(pair.t_ring, {m: pair.field.one}) for m in t_mons]
    mat = catalecticant(pair, f, d)
    _, kernel = la.rref_kernel(mat)
    return la.matrix_rows_to_polynomials(kernel, t_mons, pair.t_ring)


# ---------------------------------------------------------------------------
# Graded ideals presented by generators
# ---------------------------------------------------------------------------


@dataclass
class GradedIdealView:
    """Homogeneous ideal with lazily cached graded-piece bases.

    The degree-d piece is the span of all monomial shifts of the generators
    into degree d.  Caches are write-once per degree.
    """

    generators: List[Polynomial]
    ring: Ring
    _piece_cache: Dict[int, List[List[object]]] = dc_field(default_factory=dict)

    def __post_init__(self):
        for g in self.generators:
            if g.ring != self.ring:
                raise ValueError("generator ring mismatch")
            if not g.is_homogeneous():
                raise ValueError("generators must be homogeneous")

    def graded_piece(self, d: int) -> List[List[object]]:
        """RREF coefficient rows of I_d w.r.t. grevlex monomials of degree d."""
        if d not in self._piece_cache:
            self._piece_cache[d] = self._compute_piece(d)
        return self._piece_cache[d]

    def _compute_piece(self, d: int) -> List[List[object]]:
        mons = self.ring.monomials(d)
        field = self.ring.field
        shifted = []
        for g in self.generators:
            gd = g.total_degree()
            if gd > d or g.is_zero():
                continue
            for m in self.ring.monomials(d - gd):
                shifted.append(Polynomial(self.ring, {m: field.one}) * g)
        if not shifted:
            return []
        mat = la.polynomials_to_matrix(shifted, mons, field)
        red, _ = la.rref(mat)
        return [row[:] for row in red.entries]

    def piece_dim(self, d: int) -> int:
        return len(self.graded_piece(d))

    def piece_polynomials(self, d: int) -> List[Polynomial]:
        return la.matrix_rows_to_polynomials(
            self.graded_piece(d), self.ring.monomials(d), self.ring
        )

    def contains(self, p: Polynomial) -> bool:
        """Degreewise membership test for a homogeneous polynomial."""
        if p.is_zero():
            return True
        if not p.is_homogeneous():
            raise ValueError("membership test needs a homogeneous polynomial")
        d = p.total_degree()
        mons = self.ring.monomials(d)
        vec = la.polynomials_to_matrix([p], mons, self.ring.field).entries[0]
        return la.span_contains(self.graded_piece(d), vec, self.ring.field)


def hilbert_function(ideal: GradedIdealView, d_max: int) -> List[int]:
    """H(0..d_max) with H(d) = dim T_d - dim I_d."""
    n = ideal.ring.nvars
    return [comb(d + n - 1, n - 1) - ideal.piece_dim(d) for d in range(d_max + 1)]


def empty_in_projective_space(ideal: GradedIdealView, d_max: int = 10) -> Tuple[bool, Optional[int]]:
    """Graded Nullstellensatz emptiness certificate.

    Returns (True, d) for the first degree d <= d_max where I_d fills T_d,
    else (False, None) -- inconclusive.
    """
    n = ideal.ring.nvars
    for d in range(d_max + 1):
        if ideal.piece_dim(d) == comb(d + n - 1, n - 1):
            return True, d
    return False, None


# ---------------------------------------------------------------------------
# Rank bounds
# ---------------------------------------------------------------------------


def cactus_bound(n: int, r: int) -> int:
    """Minimal apolar-scheme length for the r-th power of a rank-(n+1) quadric."""
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    return comb(n + r, n)


def ah_rank(n: int, r: int) -> int:
    """Alexander-Hirschowitz rank of a general form of degree 2r in n+1 variables."""
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    exceptional = {(2, 2): 6, (3, 2): 10, (4, 2): 15}
    if (n, r) in exceptional:
        return exceptional[(n, r)]
    return ceil(Fraction(comb(n + 2 * r, n), n + 1))


def standard_quadric(pair: DualPair) -> Polynomial:
    """x0^2 + ... + x_{n-2}^2 + x_{n-1} x_n (rank n+1)."""
    n = pair.s_ring.nvars - 1
    x = pair.s_ring.gens()
    q = pair.s_ring.zero()
    for i in range(n - 1):
        q = q + x[i] * x[i]
    return q + x[n - 1] * x[n]


# ---------------------------------------------------------------------------
# Inverse quadrics and higher-order polarity
# ---------------------------------------------------------------------------


def quadric_gram(q: Polynomial) -> la.ScalarMatrix:
    """Symmetric matrix of a quadratic form (off-diagonal halved)."""
    if not q.is_homogeneous(2):
        raise ValueError("not a quadratic form")
    n = q.ring.nvars
    field = q.ring.field
    two_inv = field.inv(field(2))
    mat = la.ScalarMatrix.zero(n, n, field)
    for e, c in q.terms.items():
        support = [i for i, k in enumerate(e) if k]
        if len(support) == 1:
            i = support[0]
            mat.entries[i][i] = c
        else:
            i, j = support
            half = field.mul(c, two_inv)
            mat.entries[i][j] = half
            mat.entries[j][i] = half
    return mat


def gram_quadric(mat: la.ScalarMatrix, ring: Ring) -> Polynomial:
    field = ring.field
    terms = {}
    n = mat.rows
    for i in range(n):
        for j in range(i, n):
            c = mat.entries[i][j] if i == j else field.add(mat.entries[i][j], mat.entries[j][i])
            if field.is_zero(c):
                continue
            e = [0] * n
            e[i] += 1
            e[j] += 1
            terms[tuple(e)] = c
    return Polynomial(ring, terms)


def matrix_inverse(mat: la.ScalarMatrix) -> la.ScalarMatrix:
    n = mat.rows
    field = mat.field
    aug = la.ScalarMatrix(
        n, 2 * n,
        [mat.entries[i][:] + la.ScalarMatrix.identity(n, field).entries[i] for i in range(n)],
        field,
    )
    red, pivots = la.rref(aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return la.ScalarMatrix(n, n, [row[n:] for row in red.entries], field)


def inverse_quadric(pair: DualPair, q: Polynomial) -> Polynomial:
    """Inverse quadric in T: Gram(q^{-1}) = (1/4) Gram(q)^{-1}.

    This is the normalization for which the polar map l -> p_l with
    p_l(q) = l is inverse to the collineation defined by q; it reproduces
    the displayed 1/4-coefficients for the standard quadric.
    """
    gram = quadric_gram(q)
    try:
        inv = matrix_inverse(gram)
    except ValueError:
        raise ValueError("degenerate quadric has no inverse") from None
    field = pair.field
    quarter = field.inv(field(4))
    scaled = la.ScalarMatrix(
        inv.rows, inv.cols,
        [[field.mul(x, quarter) for x in row] for row in inv.entries],
        field,
    )
    return gram_quadric(scaled, pair.t_ring)


def polar_linear(pair: DualPair, q: Polynomial, l: Polynomial) -> Polynomial:
    """p_l in T_1 with p_l(q) = l, for a nondegenerate quadric q."""
    if not l.is_homogeneous(1):
        raise ValueError("need a linear form")
    mat = catalecticant(pair, q, 1)
    s_mons = pair.s_ring.monomials(1)
    vec = la.polynomials_to_matrix([l], s_mons, pair.field).entries[0]
    sol = la.solve(mat, vec)
    if sol is None:
        raise ValueError("degenerate quadric")
    t_mons = pair.t_ring.monomials(1)
    return la.matrix_rows_to_polynomials([sol[0]], t_mons, pair.t_ring)[0]


def polar_form(pair: DualPair, f: Polynomial, l: Polynomial, a: int) -> Polynomial:
    """The unique g in T_a with g(f) = l^a, for f of degree 2a.

    For quartics this is the polar quadric q_l; for the sextic case a = 3 it
    is the polar cubic.  Requires the middle catalecticant to be invertible.
    """
    if not l.is_homogeneous(1):
        raise ValueError("need a linear form")
    d = f.total_degree()
    if d != 2 * a:
        raise ValueError("form degree must be twice the operator degree")
    mat = catalecticant(pair, f, a)
    target = l ** a
    s_mons = pair.s_ring.monomials(a)
    vec = la.polynomials_to_matrix([target], s_mons, pair.field).entries[0]
    sol = la.solve(mat, vec)
    if sol is None or not sol[1]:
        raise ValueError("middle catalecticant is singular")
    t_mons = pair.t_ring.monomials(a)
    return la.matrix_rows_to_polynomials([sol[0]], t_mons, pair.t_ring)[0]


def polar_quadric(pair: DualPair, f: Polynomial, l: Polynomial) -> Polynomial:
    """q_l: the exact solution of q_l(f) = l^2 (no projective normalization)."""
    return polar_form(pair, f, l, 2)


@dataclass
class PolarityData:
    """Quartic f with invertible Omega_f = Cat_{2,2}(f) and derived forms.

    q_f lives in an 8-variable ring (y-slot, z-slot); the inverse quartic
    is its diagonal restriction, a quartic in T.
    """

    f: Polynomial
    omega: la.ScalarMatrix
    omega_inverse: la.ScalarMatrix
    q_f: Polynomial
    biring: Ring
    f_inverse: Polynomial


def pairing_values(pair: DualPair, a: int) -> List[object]:
    """Diagonal of the perfect pairing T_a x S_a: <y^e, x^e> = e!."""
    from math import factorial

    field = pair.field
    vals = []
    for e in pair.t_ring.monomials(a):
        v = 1
        for k in e:
            v *= factorial(k)
        vals.append(field(v))
    return vals


def conjugate_form(pair: DualPair, f: Polynomial) -> PolarityData:
    """q_f(l1, l2) = Omega_f^{-1}(l1^2)(l2^2) and the inverse quartic f^{-1}."""
    if not f.is_homogeneous(4):
        raise ValueError("conjugate form needs a quartic")
    field = pair.field
    omega = catalecticant(pair, f, 2)
    if la.rank(omega) != omega.cols:
        raise ValueError("Omega_f is singular (f has an apolar quadric)")
    omega_inv = matrix_inverse(omega)

    n = pair.s_ring.nvars
    biring = Ring(
        tuple(f"y{i}" for i in range(n)) + tuple(f"z{i}" for i in range(n)), field
    )
    s_mons = pair.s_ring.monomials(2)
    pair_diag = pairing_values(pair, 2)

    def square_coeffs(offset: int) -> List[Polynomial]:
        """l^2 coefficients on S_2 monomials, as quadratics in slot variables."""
        out = []
        for m in s_mons:
            support = [i for i, k in enumerate(m) if k]
            e = [0] * biring.nvars
            if len(support) == 1:
                e[offset + support[0]] = 2
                coeff = 1
            else:
                e[offset + support[0]] = 1
                e[offset + support[1]] = 1
                coeff = 2
            out.append(Polynomial.from_terms(biring, {tuple(e): coeff}))
        return out

    y_sq = square_coeffs(0)
    z_sq = square_coeffs(n)
    # q_f = sum_{m,m'} zvec[m'] * pairing(m') * OmegaInv[m'][m] * yvec[m]
    q_f = biring.zero()
    for jm, ym in enumerate(y_sq):
        col = [omega_inv.entries[i][jm] for i in range(omega_inv.rows)]
        for im, zm in enumerate(z_sq):
            c = field.mul(col[im], pair_diag[im])
            if field.is_zero(c):
                continue
            q_f = q_f + (ym * zm).scale(c)
    # diagonal restriction z := y gives the inverse quartic in T
    subs = {}
    for i in range(n):
        subs[i] = pair.t_ring.var(i)
        subs[n + i] = pair.t_ring.var(i)
    f_inv = q_f.substitute(subs)
    return PolarityData(f, omega, omega_inv, q_f, biring, f_inv)


def apply_operator(pair: DualPair, g: Polynomial, s: Polynomial):
    """Scalar pairing T_a x S_a -> field (full contraction)."""
    value = contract(pair, g, s)
    return value.coefficient((0,) * pair.s_ring.nvars)


# ---------------------------------------------------------------------------
# Rank-eleven certificates
# ---------------------------------------------------------------------------


@dataclass
class CertificateReport:
    case: str
    ok: bool
    failures: List[str]
    details: Dict[str, object]


def _points_piece(
    ideal_rows: List[List[object]], mons, points, ring: Ring
) -> List[List[object]]:
    """Cut a graded piece by vanishing at the given points."""
    field = ring.field
    polys = la.matrix_rows_to_polynomials(ideal_rows, mons, ring)
    if not polys:
        return []
    # rows = points, columns = basis polynomials of the piece
    eval_matrix = la.ScalarMatrix.from_rows(
        [[p.evaluate(pt) for p in polys] for pt in points], field
    )
    _, ker = la.rref_kernel(eval_matrix)
    vectors = []
    for k in ker:
        vec = [field.zero] * len(mons)
        for coeff, row in zip(k, ideal_rows):
            if field.is_zero(coeff):
                continue
            vec = [field.add(x, field.mul(coeff, y)) for x, y in zip(vec, row)]
        vectors.append(vec)
    return la.row_space_basis(vectors, field)


def jacobian_ideal_generators(gens: List[Polynomial], size: int) -> List[Polynomial]:
    """The generators plus the size x size minors of their Jacobian."""
    ring = gens[0].ring
    jac = la.PolyMatrix.from_rows(
        [[g.differentiate(j) for j in range(ring.nvars)] for g in gens], ring
    )
    return list(gens) + [m for m in la.minors(jac, size) if not m.is_zero()]


def rank_eleven_certificate(
    pair: DualPair,
    f: Polynomial,
    linear_forms: List[Polynomial],
    points: List[Sequence[object]],
    operator_degree: int,
    membership_checks: List[Tuple[int, Sequence[object]]],
    displayed_polars: Optional[List[Polynomial]] = None,
    ci_length: int = None,
    apolarity_degrees: Sequence[int] = (),
    emptiness_dmax: int = 8,
) -> CertificateReport:
    """Verify a smooth length-eleven apolar scheme built as CI + points.

    The scheme is the complete intersection of the polar forms of the given
    linear forms, together with the listed extra points.  Sub-checks: the
    displayed polar forms are reproduced up to scalar, the displayed point
    memberships hold, the CI has the Hilbert function of its expected length,
    the Jacobian-augmented ideal is empty in projective space (smoothness),
    the points avoid the CI, and the union is apolar to f in the stated
    degrees with total length eleven.
    """
    field = pair.field
    ring = pair.t_ring
    failures: List[str] = []
    details: Dict[str, object] = {}

    polars = [polar_form(pair, f, l, operator_degree) for l in linear_forms]
    details["polars"] = polars

    if displayed_polars is not None:
        scalars = []
        for g, disp in zip(polars, displayed_polars):
            ratio = None
            ok = True
            for e, c in disp.terms.items():
                mine = g.coefficient(e)
                if field.is_zero(mine):
                    ok = False
                    break
                r = field.div(c, mine)
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    ok = False
                    break
            ok = ok and len(disp.terms) == len(g.terms)
            if not ok:
                failures.append("displayed polar form is not proportional to the solved one")
                ratio = None
            scalars.append(ratio)
        details["display_scalars"] = scalars

    for which, pt in membership_checks:
        val = polars[which].evaluate(pt)
        if not field.is_zero(val):
            failures.append(f"membership: polar form {which} does not vanish at {tuple(pt)}")

    ci = GradedIdealView(polars, ring)
    d_top = max(apolarity_degrees) if apolarity_degrees else operator_degree + 3
    hf = hilbert_function(ci, d_top)
    details["ci_hilbert"] = hf
    if ci_length is not None:
        stable = hf[operator_degree + 1:]
        if not stable or any(v != ci_length for v in stable):
            failures.append(f"CI Hilbert function {hf} does not stabilize at {ci_length}")

    # smoothness: Jacobian-augmented ideal is empty in projective space
    jac_gens = jacobian_ideal_generators(polars, len(polars))
    empty, at_degree = empty_in_projective_space(GradedIdealView(jac_gens, ring), emptiness_dmax)
    details["jacobian_empty_degree"] = at_degree
    if not empty:
        failures.append(f"smoothness certificate inconclusive up to degree {emptiness_dmax}")

    # the extra points must avoid the CI (all polar forms vanish nowhere jointly)
    for pt in points:
        if all(field.is_zero(g.evaluate(pt)) for g in polars):
            failures.append(f"extra point {tuple(pt)} lies on the complete intersection")

    # union scheme: length eleven, apolar to f in the stated degrees
    union_hf = []
    apolar_ok = True
    for d in range(d_top + 1):
        mons = ring.monomials(d)
        piece = _points_piece(ci.graded_piece(d), mons, points, ring)
        union_hf.append(len(mons) - len(piece))
        if d in apolarity_degrees:
            for poly in la.matrix_rows_to_polynomials(piece, mons, ring):
                image = contract(pair, poly, f)
                if not image.is_zero():
                    apolar_ok = False
                    failures.append(f"union ideal piece in degree {d} is not apolar")
                    break
    details["union_hilbert"] = union_hf
    details["apolar_ok"] = apolar_ok
    stable = union_hf[operator_degree + 1:]
    if not stable or any(v != 11 for v in stable):
        failures.append(f"union Hilbert function {union_hf} does not stabilize at 11")

    return CertificateReport(
        case=f"rank11/{ring.field.name}", ok=not failures, failures=failures, details=details
    )
