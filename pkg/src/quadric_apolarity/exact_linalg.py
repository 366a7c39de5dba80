"""Exact dense linear algebra over a field, plus symbolic minors.

Row reduction over the rationals first clears denominators and runs a
fraction-free (Bareiss-style) forward elimination to keep intermediate
entries integral; pivots are normalized only at the end.  Over a prime
field the naive Gauss-Jordan is used.  Symbolic determinants of matrices
with polynomial entries go through memoized cofactor expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .poly_core import Field, Polynomial, QQ, Ring


@dataclass
class ScalarMatrix:
    """Dense matrix of field scalars, row-major."""

    rows: int
    cols: int
    entries: List[List[object]]
    field: Field

    @staticmethod
    def from_rows(rows: Sequence[Sequence[object]], field: Field) -> "ScalarMatrix":
        data = [[field(x) for x in row] for row in rows]
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        return ScalarMatrix(len(data), ncols, data, field)

    @staticmethod
    def zero(rows: int, cols: int, field: Field) -> "ScalarMatrix":
        return ScalarMatrix(rows, cols, [[field.zero] * cols for _ in range(rows)], field)

    @staticmethod
    def identity(n: int, field: Field) -> "ScalarMatrix":
        m = ScalarMatrix.zero(n, n, field)
        for i in range(n):
            m.entries[i][i] = field.one
        return m

    def copy(self) -> "ScalarMatrix":
        return ScalarMatrix(self.rows, self.cols, [row[:] for row in self.entries], self.field)

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(
            self.cols, self.rows,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.field,
        )

    def matmul(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        f = self.field
        out = ScalarMatrix.zero(self.rows, other.cols, f)
        for i in range(self.rows):
            row = self.entries[i]
            for k in range(self.cols):
                a = row[k]
                if f.is_zero(a):
                    continue
                target = out.entries[i]
                orow = other.entries[k]
                for j in range(other.cols):
                    target[j] = f.add(target[j], f.mul(a, orow[j]))
        return out


def _clear_denominators(row: List[Fraction]) -> List[int]:
    lcm = 1
    for x in row:
        if x:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    g = 0
    ints = []
    for x in row:
        v = int(x * lcm)
        ints.append(v)
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _rref_qq(entries: List[List[Fraction]], rows: int, cols: int):
    """Fraction-free forward elimination, then normalized back-substitution."""
    mat = [_clear_denominators([Fraction(x) for x in row]) for row in entries]
    pivots: List[int] = []
    prev_pivot = 1
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if mat[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        p = mat[r][c]
        for i in range(r + 1, rows):
            if mat[i][c] == 0:
                # still rescale for the Bareiss division to stay exact
                mat[i] = [v * p // prev_pivot for v in mat[i]]
                continue
            q = mat[i][c]
            mat[i] = [(p * mat[i][j] - q * mat[r][j]) // prev_pivot for j in range(cols)]
        prev_pivot = p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    # back-substitute into reduced echelon form with exact rationals
    red = [[Fraction(v) for v in row] for row in mat[:r]]
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        inv = 1 / red[i][c]
        red[i] = [v * inv for v in red[i]]
        for k in range(i):
            factor = red[k][c]
            if factor:
                red[k] = [a - factor * b for a, b in zip(red[k], red[i])]
    return red, pivots


def _rref_fp(entries, rows: int, cols: int, field):
    mat = [[x % field.p for x in row] for row in entries]
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if mat[i][c] % field.p != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = field.inv(mat[r][c])
        mat[r] = [v * inv % field.p for v in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c] % field.p != 0:
                q = mat[i][c]
                mat[i] = [(a - q * b) % field.p for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return mat[:r], pivots


def rref(m: ScalarMatrix) -> Tuple[ScalarMatrix, List[int]]:
    """Reduced row-echelon form (zero rows dropped) and pivot columns."""
    if isinstance(m.field, QQ):
        red, pivots = _rref_qq(m.entries, m.rows, m.cols)
    else:
        red, pivots = _rref_fp(m.entries, m.rows, m.cols, m.field)
    return ScalarMatrix(len(red), m.cols, red, m.field), pivots


def rref_kernel(m: ScalarMatrix) -> Tuple[int, List[List[object]]]:
    """Rank and a reduced-echelon-normalized kernel basis.

    Postcondition: rank + len(kernel) == m.cols and m @ k == 0 for each k.
    """
    red, pivots = rref(m)
    field = m.field
    rank = len(pivots)
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = [field.zero] * m.cols
        vec[fc] = field.one
        for i, pc in enumerate(pivots):
            vec[pc] = field.neg(red.entries[i][fc])
        basis.append(vec)
    return rank, basis


def rank(m: ScalarMatrix) -> int:
    return len(rref(m)[1])


def solve(m: ScalarMatrix, rhs: Sequence[object]) -> Optional[Tuple[List[object], bool]]:
    """Solve m x = rhs; returns (solution, unique_flag) or None if inconsistent."""
    if len(rhs) != m.rows:
        raise ValueError("rhs length does not match row count")
    field = m.field
    aug = ScalarMatrix(
        m.rows, m.cols + 1,
        [row[:] + [field(rhs[i])] for i, row in enumerate(m.entries)],
        field,
    )
    red, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [field.zero] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = red.entries[i][m.cols]
    unique = len(pivots) == m.cols
    return x, unique


def row_space_basis(rows: Sequence[Sequence[object]], field: Field) -> List[List[object]]:
    """RREF basis of the span of the given vectors (canonical form)."""
    if not rows:
        return []
    red, _ = rref(ScalarMatrix.from_rows(rows, field))
    return [row[:] for row in red.entries]


def span_dim(rows: Sequence[Sequence[object]], field: Field) -> int:
    if not rows:
        return 0
    return rank(ScalarMatrix.from_rows(rows, field))


def spans_equal(a: Sequence[Sequence[object]], b: Sequence[Sequence[object]], field: Field) -> bool:
    return row_space_basis(a, field) == row_space_basis(b, field)


def span_contains(a: Sequence[Sequence[object]], vec: Sequence[object], field: Field) -> bool:
    da = span_dim(list(a), field)
    return span_dim(list(a) + [list(vec)], field) == da


def intersect_row_spaces(
    a: Sequence[Sequence[object]], b: Sequence[Sequence[object]], field: Field
) -> List[List[object]]:
    """Basis (RREF) of rowspace(a) ∩ rowspace(b)."""
    a = [list(r) for r in a]
    b = [list(r) for r in b]
    if not a or not b:
        return []
    ncols = len(a[0])
    # kernel of [A^t | -B^t]: columns are coefficients (u, v) with A^t u = B^t v
    stacked = ScalarMatrix.from_rows(
        [[a[i][c] for i in range(len(a))] + [field.neg(field(b[j][c])) for j in range(len(b))]
         for c in range(ncols)],
        field,
    )
    _, ker = rref_kernel(stacked)
    vectors = []
    for k in ker:
        u = k[: len(a)]
        vec = [field.zero] * ncols
        for coeff, row in zip(u, a):
            if field.is_zero(coeff):
                continue
            vec = [field.add(x, field.mul(coeff, y)) for x, y in zip(vec, row)]
        if any(not field.is_zero(x) for x in vec):
            vectors.append(vec)
    return row_space_basis(vectors, field)


# ---------------------------------------------------------------------------
# Matrices with polynomial entries
# ---------------------------------------------------------------------------


@dataclass
class PolyMatrix:
    """Matrix with Polynomial entries over a common ring."""

    rows: int
    cols: int
    entries: List[List[Polynomial]]
    ring: Ring

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Polynomial]], ring: Ring) -> "PolyMatrix":
        data = [list(r) for r in rows]
        ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for p in r:
                if p.ring != ring:
                    raise ValueError("entry ring mismatch")
        return PolyMatrix(len(data), ncols, data, ring)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            self.cols, self.rows,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.ring,
        )

    def matmul(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        zero = self.ring.zero()
        out = [[zero for _ in range(other.cols)] for _ in range(self.rows)]
        for i in range(self.rows):
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                out[i][j] = acc
        return PolyMatrix(self.rows, other.cols, out, self.ring)

    def submatrix(self, row_set: Sequence[int], col_set: Sequence[int]) -> "PolyMatrix":
        data = [[self.entries[i][j] for j in col_set] for i in row_set]
        return PolyMatrix(len(row_set), len(col_set), data, self.ring)

    def determinant(self) -> Polynomial:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        memo: dict = {}
        all_rows = tuple(range(self.rows))
        all_cols = tuple(range(self.cols))

        def det(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Polynomial:
            if not rows:
                return self.ring.one()
            key = (rows, cols)
            if key in memo:
                return memo[key]
            i = rows[0]
            rest = rows[1:]
            acc = self.ring.zero()
            for pos, j in enumerate(cols):
                a = self.entries[i][j]
                if a.is_zero():
                    continue
                minor_cols = cols[:pos] + cols[pos + 1:]
                term = a * det(rest, minor_cols)
                acc = acc + term if pos % 2 == 0 else acc - term
            memo[key] = acc
            return acc

        return det(all_rows, all_cols)


def minors(
    m: PolyMatrix,
    k: int,
    row_set: Optional[Sequence[int]] = None,
    col_set: Optional[Sequence[int]] = None,
) -> List[Polynomial]:
    """All k x k minors over the selected rows/columns.

    Ordering is deterministic: lexicographic in the (row-tuple, col-tuple)
    index pairs.
    """
    rows = tuple(row_set) if row_set is not None else tuple(range(m.rows))
    cols = tuple(col_set) if col_set is not None else tuple(range(m.cols))
    if k > min(len(rows), len(cols)):
        raise ValueError(f"minor size {k} too large")
    if any(i >= m.rows for i in rows) or any(j >= m.cols for j in cols):
        raise IndexError("row/column index out of range")
    out = []
    for rsel in combinations(rows, k):
        for csel in combinations(cols, k):
            out.append(m.submatrix(rsel, csel).determinant())
    return out


def polynomials_to_matrix(
    polys: Sequence[Polynomial], monomials: Sequence[Tuple[int, ...]], field: Field
) -> ScalarMatrix:
    """Coefficient matrix: one row per polynomial, columns indexed by monomials."""
    index = {m: j for j, m in enumerate(monomials)}
    rows = []
    for p in polys:
        row = [field.zero] * len(monomials)
        for e, c in p.terms.items():
            if e not in index:
                raise ValueError(f"monomial {e} outside the prescribed support")
            row[index[e]] = c
        rows.append(row)
    return ScalarMatrix(len(rows), len(monomials), rows, field)


def matrix_rows_to_polynomials(
    rows: Sequence[Sequence[object]], monomials: Sequence[Tuple[int, ...]], ring: Ring
) -> List[Polynomial]:
    out = []
    for row in rows:
        out.append(Polynomial.from_terms(ring, dict(zip(monomials, row))))
    return out
