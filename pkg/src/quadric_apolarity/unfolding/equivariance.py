"""Finite symbolic identity checks for the group action on the quadric.

The group is a pair of unit-determinant 2 x 2 matrices acting on the two
rulings of the inverse quadric; the displayed actions on the form
variables, the dual variables, the tangent-frame basis e_{i,j}, and the
net of skew forms are verified on exact rational group elements.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..poly_core import Polynomial, QQ_FIELD, Ring
from .. import exact_linalg as la
from .. import apolarity as ap
from .. import fixtures_io
from .components import ComponentReport
from .quaternary import new_pair, new_quadric


GroupElement = Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]
# (h1, h2, h3, h4), (k1, k2, k3, k4) with h1 h4 - h2 h3 = k1 k4 - k2 k3 = 1


def _check_unit(m: Sequence[Fraction]) -> None:
    if m[0] * m[3] - m[1] * m[2] != 1:
        raise ValueError("matrix does not have determinant one")


def x_action(g: GroupElement, ring: Ring) -> Dict[int, Polynomial]:
    """Action on the form variables x0..x3."""
    (h1, h2, h3, h4), (k1, k2, k3, k4) = g
    x0, x1, x2, x3 = ring.gens()
    return {
        0: x0.scale(h1 * k4) - x1.scale(h2 * k3) - x2.scale(h2 * k4) - x3.scale(h1 * k3),
        1: -x0.scale(h3 * k2) + x1.scale(h4 * k1) + x2.scale(h4 * k2) + x3.scale(h3 * k1),
        2: -x0.scale(h3 * k4) + x1.scale(h4 * k3) + x2.scale(h4 * k4) + x3.scale(h3 * k3),
        3: -x0.scale(h1 * k2) + x1.scale(h2 * k1) + x2.scale(h2 * k2) + x3.scale(h1 * k1),
    }


def y_action(g: GroupElement, ring: Ring) -> Dict[int, Polynomial]:
    """Induced action on the dual variables y0..y3."""
    (h1, h2, h3, h4), (k1, k2, k3, k4) = g
    y0, y1, y2, y3 = ring.gens()
    return {
        0: y0.scale(h4 * k1) - y1.scale(h3 * k2) + y2.scale(h3 * k1) + y3.scale(h4 * k2),
        1: -y0.scale(h2 * k3) + y1.scale(h1 * k4) - y2.scale(h1 * k3) - y3.scale(h2 * k4),
        2: y0.scale(h2 * k1) - y1.scale(h1 * k2) + y2.scale(h1 * k1) + y3.scale(h2 * k2),
        3: y0.scale(h4 * k3) - y1.scale(h3 * k4) + y2.scale(h3 * k3) + y3.scale(h4 * k4),
    }


def segre_point(ab: Tuple[Fraction, Fraction], cd: Tuple[Fraction, Fraction]) -> List[Fraction]:
    """The doubly-ruled embedding ((a:b),(c:d)) -> (-ad : bc : bd : ac)."""
    a, b = ab
    c, d = cd
    return [-a * d, b * c, b * d, a * c]


SAMPLE_ELEMENTS: List[GroupElement] = [
    ((Fraction(1), Fraction(0), Fraction(0), Fraction(1)),
     (Fraction(1), Fraction(0), Fraction(0), Fraction(1))),
    ((Fraction(1), Fraction(1), Fraction(0), Fraction(1)),
     (Fraction(1), Fraction(0), Fraction(0), Fraction(1))),
    ((Fraction(2), Fraction(3), Fraction(0), Fraction(1, 2)),
     (Fraction(1), Fraction(-2), Fraction(0), Fraction(1))),
    ((Fraction(2), Fraction(1), Fraction(3), Fraction(2)),
     (Fraction(1), Fraction(0), Fraction(5), Fraction(1))),
    ((Fraction(0), Fraction(1), Fraction(-1), Fraction(0)),
     (Fraction(1), Fraction(2), Fraction(1), Fraction(3))),
]

TRIANGULAR_ELEMENTS = [g for g in SAMPLE_ELEMENTS if g[0][2] == 0 and g[1][2] == 0]


def _e_action_matrix(
    g: GroupElement, e_vec: List[Polynomial], b_vec: List[Polynomial], pair: ap.DualPair
) -> Optional[List[List[Fraction]]]:
    """Matrix of the induced action on the span of e_vec modulo b_vec."""
    ring = pair.t_ring
    field = ring.field
    mons3 = ring.monomials(3)
    basis = e_vec + b_vec
    basis_rows = [la.polynomials_to_matrix([p], mons3, field).entries[0] for p in basis]
    mat = la.ScalarMatrix.from_rows(
        [[basis_rows[r][c] for r in range(len(basis))] for c in range(len(mons3))], field
    )
    subs = y_action(g, ring)
    rows = []
    for e in e_vec:
        image = e.substitute(subs)
        vec = la.polynomials_to_matrix([image], mons3, field).entries[0]
        sol = la.solve(mat, vec)
        if sol is None:
            return None
        rows.append(sol[0][: len(e_vec)])
    return rows


def _expected_triangular_e_action(g: GroupElement) -> List[List[Fraction]]:
    """The displayed stabilizer action on (e30, e20, e21, e11, e12, e02, e03).

    Rows are images; the e11 row in the source carries an overall factor 2
    that fails at the identity and is dropped here (the re-derivation
    confirms the corrected row).
    """
    (h1, h2, _h3, h4), (k1, k2, _k3, k4) = g
    z = Fraction(0)
    return [
        [h4**3 * k1**3, z, z, z, z, z, z],
        [h4**2 * k1**2 * h2 * k1, h4**2 * k1**2 * h1 * k1, -h4**2 * k1**2 * h1 * k2,
         z, z, z, z],
        [z, z, h1 * h4**2 * k1**2 * k4, z, z, z, z],
        [z, z, 2 * h1 * h4 * k1 * k4 * h2 * k1, h1 * h4 * k1 * k4 * h1 * k1,
         -2 * h1 * h4 * k1 * k4 * h1 * k2, z, z],
        [z, z, z, z, h1**2 * h4 * k1 * k4**2, z, z],
        [z, z, z, z, h1**2 * k4**2 * h2 * k1, h1**2 * k4**2 * h1 * k1,
         -h1**2 * k4**2 * h1 * k2],
        [z, z, z, z, z, z, h1**3 * k4**3],
    ]


# the net of skew forms in wedge coordinates on the e-basis (0-indexed):
# rho_y0 = (2/3) e11^e12 - e21^e02 + e20^e03, etc.
RHO_WEDGES = (
    {(3, 4): Fraction(2, 3), (2, 5): Fraction(-1), (1, 6): Fraction(1)},
    {(2, 3): Fraction(2, 3), (1, 4): Fraction(-1), (0, 5): Fraction(1)},
    {(2, 4): Fraction(-1, 3), (0, 6): Fraction(-1)},
)


def _wedge_image(matrix: List[List[Fraction]], rho: Dict[Tuple[int, int], Fraction]):
    """Push a 2-vector through the induced wedge-square of a 7x7 matrix."""
    out: Dict[Tuple[int, int], Fraction] = {}
    for (i, j), c in rho.items():
        for a in range(7):
            for b in range(7):
                coeff = c * matrix[i][a] * matrix[j][b]
                if coeff == 0:
                    continue
                if a == b:
                    continue
                key = (a, b) if a < b else (b, a)
                sign = 1 if a < b else -1
                out[key] = out.get(key, Fraction(0)) + sign * coeff
    return {k: v for k, v in out.items() if v != 0}


def _expected_k_action(g: GroupElement) -> List[List[Fraction]]:
    """Displayed action on (rho_y0, rho_y1, rho_y2) for triangular g."""
    (h1, h2, _h3, h4), (k1, k2, _k3, k4) = g
    z = Fraction(0)
    return [
        [h1**2 * k1 * k4, z, -h1 * h2 * k1 * k4],
        [z, h1 * h4 * k1**2, h1 * h4 * k1 * k2],
        [z, z, h1 * h4 * k1 * k4],
    ]


def equivariance_checks(base: Optional[str] = None) -> ComponentReport:
    report = ComponentReport(case="equivariance")
    pair = new_pair()
    s_ring, t_ring = pair.s_ring, pair.t_ring
    field = pair.field
    q = new_quadric(pair)
    f = q * q

    gens16 = fixtures_io.load_polynomials("quaternary/apolar_gens_new.txt", t_ring, base)
    mons3 = t_ring.monomials(3)
    span16 = [la.polynomials_to_matrix([p], mons3, field).entries[0] for p in gens16]
    e_vec = fixtures_io.load_polynomials("quaternary/a_vec.txt", t_ring, base)
    b_vec = fixtures_io.load_polynomials("quaternary/b_vec.txt", t_ring, base)
    m7 = fixtures_io.load_matrix("quaternary/m7.txt", t_ring, base)

    # the net matrix restricted to the tangent plane decomposes into the
    # displayed wedge representatives: M' = 3 (y0 P0 + y1 P1 + y2 P2)
    m7_prime_ok = True
    for i in range(7):
        for j in range(7):
            entry = m7.entries[i][j].set_var(t_ring.index("y3"), 0)
            expected = t_ring.zero()
            for k, rho in enumerate(RHO_WEDGES):
                c = rho.get((i, j), Fraction(0)) - rho.get((j, i), Fraction(0))
                if c:
                    expected = expected + t_ring.var(k).scale(3 * c)
            if entry != expected:
                m7_prime_ok = False
    report.add("net-matrix-matches-rho-wedges", m7_prime_ok,
               "M' = 3(y0 rho0 + y1 rho1 + y2 rho2)")

    for idx, g in enumerate(SAMPLE_ELEMENTS):
        for m in g:
            _check_unit(m)
        tag = f"g{idx}"
        triangular = g[0][2] == 0 and g[1][2] == 0

        # (1) the x-action fixes the quadric (hence its square)
        xs = x_action(g, s_ring)
        report.add(f"{tag}-x-action-fixes-q", q.substitute(xs) == q)

        # the doubly-ruled embedding is equivariant
        emb_ok = True
        for ab, cd in (((Fraction(1), Fraction(2)), (Fraction(3), Fraction(1))),
                       ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(1)))):
            h, k = g
            g_ab = (h[0] * ab[0] + h[1] * ab[1], h[2] * ab[0] + h[3] * ab[1])
            g_cd = (k[0] * cd[0] + k[1] * cd[1], k[2] * cd[0] + k[3] * cd[1])
            moved = segre_point(g_ab, g_cd)
            # push the original point through the action on coordinates:
            # points transform contravariantly to the variable substitution
            before = segre_point(ab, cd)
            after = [sum(x_mat_entry(xs, i, j) * before[j] for j in range(4))
                     for i in range(4)]
            if not _proportional(after, moved):
                emb_ok = False
        report.add(f"{tag}-embedding-equivariant", emb_ok)

        # (2) the y-action preserves the apolar cubics as a span
        ys = y_action(g, t_ring)
        images = [p.substitute(ys) for p in gens16]
        img_rows = [la.polynomials_to_matrix([p], mons3, field).entries[0] for p in images]
        report.add(
            f"{tag}-apolar-span-preserved",
            la.spans_equal(span16, img_rows, field),
        )

        if not triangular:
            continue

        # (3) the stabilizer fixes p = [x2] and acts on the e-basis as displayed
        p_image = xs[2]
        fixes_p = _proportional(
            [p_image.coefficient(tuple(1 if t == i else 0 for t in range(4)))
             for i in range(4)],
            [Fraction(0), Fraction(0), Fraction(1), Fraction(0)],
        )
        report.add(f"{tag}-stabilizer-fixes-p", fixes_p)

        e_mat = _e_action_matrix(g, e_vec, b_vec, pair)
        if e_mat is None:
            report.add(f"{tag}-e-action-in-span", False, "image left A_p")
            continue
        report.add(f"{tag}-e-action-displayed", e_mat == _expected_triangular_e_action(g))

        # (4) the wedge-square action on the net matches the displayed
        # K-action (equal to the displayed R-action coefficients)
        k_expected = _expected_k_action(g)
        k_ok = True
        for r, rho in enumerate(RHO_WEDGES):
            image = _wedge_image(e_mat, rho)
            # solve image = sum_j coeff_j rho_j
            combo: Dict[Tuple[int, int], Fraction] = {}
            for j, coeff in enumerate(k_expected[r]):
                if coeff == 0:
                    continue
                for key, c in RHO_WEDGES[j].items():
                    combo[key] = combo.get(key, Fraction(0)) + coeff * c
            combo = {k2: v for k2, v in combo.items() if v != 0}
            if combo != image:
                k_ok = False
        report.add(f"{tag}-K-action-displayed", k_ok)
    return report


def x_mat_entry(xs: Dict[int, Polynomial], i: int, j: int) -> Fraction:
    """Coefficient of x_j in the image of x_i."""
    e = [0, 0, 0, 0]
    e[j] = 1
    return xs[i].coefficient(tuple(e))


def _proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    ratio = None
    for a, b in zip(u, v):
        if (a == 0) != (b == 0):
            return False
        if a != 0:
            r = Fraction(a) / Fraction(b)
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return ratio is not None
