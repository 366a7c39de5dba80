"""Exact sparse multivariate polynomial arithmetic over QQ and prime fields.

A polynomial is a finite map from exponent tuples to nonzero field scalars,
tagged with a ring descriptor (variable names + coefficient field).  Scalars
are plain ``Fraction`` over the rationals and canonical ``int`` residues in
``[0, p)`` over a prime field; there is no floating point anywhere.

Canonical display order is graded reverse lexicographic (grevlex).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
ScalarLike = Union[int, str, Fraction]


class QQ:
    """The field of rationals; scalars are ``Fraction`` in lowest terms."""

    name = "QQ"
    characteristic = 0

    def __call__(self, value: ScalarLike) -> Fraction:
        return Fraction(value)

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def sub(self, a: Fraction, b: Fraction) -> Fraction:
        return a - b

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a * b

    def neg(self, a: Fraction) -> Fraction:
        return -a

    def inv(self, a: Fraction) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in QQ")
        return 1 / a

    def div(self, a: Fraction, b: Fraction) -> Fraction:
        return a / self.one if b == 1 else a / b

    def is_zero(self, a: Fraction) -> bool:
        return a == 0

    def to_str(self, a: Fraction) -> str:
        return str(a)

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QQ)

    def __hash__(self) -> int:
        return hash("QQ")


class PrimeField:
    """Z/p for a prime p; scalars are canonical residues in [0, p)."""

    characteristic: int

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def __call__(self, value: ScalarLike) -> int:
        if isinstance(value, Fraction) or (isinstance(value, str) and "/" in value):
            frac = Fraction(value)
            den = frac.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return frac.numerator * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of zero in F{self.p}")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def to_str(self, a: int) -> str:
        return str(a % self.p)

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))


Field = Union[QQ, PrimeField]

QQ_FIELD = QQ()


@dataclass(frozen=True)
class Ring:
    """Ambient polynomial ring descriptor: ordered variable names + field."""

    names: Tuple[str, ...]
    field: Field = QQ_FIELD

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, value: ScalarLike) -> "Polynomial":
        c = self.field(value)
        if self.field.is_zero(c):
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, i: Union[int, str]) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        expo = [0] * self.nvars
        expo[i] = 1
        return Polynomial(self, {tuple(expo): self.field.one})

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def monomials(self, degree: int) -> Tuple[Exponent, ...]:
        """All exponent tuples of the given total degree, grevlex-descending."""
        out = list(_exponents(self.nvars, degree))
        out.sort(key=grevlex_key, reverse=True)
        return tuple(out)


def _exponents(nvars: int, degree: int) -> Iterable[Exponent]:
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _exponents(nvars - 1, degree - first):
            yield (first,) + rest


def grevlex_key(e: Exponent):
    """Sort key: grevlex order (larger key = larger monomial)."""
    return (sum(e), tuple(-x for x in reversed(e)))


class Polynomial:
    """Immutable-by-convention sparse polynomial; arithmetic is exact."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Dict[Exponent, object]):
        self.ring = ring
        self.terms = terms  # no zero coefficients stored

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_terms(ring: Ring, items: Mapping[Exponent, ScalarLike]) -> "Polynomial":
        field = ring.field
        terms = {}
        for expo, coeff in items.items():
            c = field(coeff)
            if not field.is_zero(c):
                terms[tuple(expo)] = c
        return Polynomial(ring, terms)

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Total degree; 0 for the zero polynomial by convention."""
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self, degree: int = None) -> bool:
        if not self.terms:
            return True
        degrees = {sum(e) for e in self.terms}
        if len(degrees) != 1:
            return False
        return degree is None or degrees == {degree}

    def initial_monomial(self) -> Exponent:
        """Largest monomial in grevlex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no initial monomial")
        return max(self.terms, key=grevlex_key)

    def coefficient(self, expo: Exponent):
        return self.terms.get(tuple(expo), self.ring.field.zero)

    def degree_in(self, var_index: int) -> int:
        return max((e[var_index] for e in self.terms), default=0)

    def involves(self, var_index: int) -> bool:
        return any(e[var_index] for e in self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _check_ring(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring.names} vs {other.ring.names}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self + self.ring.const(other)
        self._check_ring(other)
        field = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = field.add(out.get(e, field.zero), c)
            if field.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        field = self.ring.field
        return Polynomial(self.ring, {e: field.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return self.ring.const(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check_ring(other)
        field = self.ring.field
        out: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = field.add(out.get(e, field.zero), field.mul(c1, c2))
                if field.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def scale(self, scalar: ScalarLike) -> "Polynomial":
        field = self.ring.field
        c0 = field(scalar)
        if field.is_zero(c0):
            return self.ring.zero()
        return Polynomial(self.ring, {e: field.mul(c, c0) for e, c in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    # -- calculus and substitution -------------------------------------------

    def differentiate(self, var_index: int) -> "Polynomial":
        """Formal partial derivative with respect to one variable."""
        if not 0 <= var_index < self.ring.nvars:
            raise IndexError(f"variable index {var_index} out of range")
        field = self.ring.field
        out: Dict[Exponent, object] = {}
        for e, c in self.terms.items():
            k = e[var_index]
            if k == 0:
                continue
            new_e = e[:var_index] + (k - 1,) + e[var_index + 1:]
            s = field.add(out.get(new_e, field.zero), field.mul(c, field(k)))
            if field.is_zero(s):
                out.pop(new_e, None)
            else:
                out[new_e] = s
        return Polynomial(self.ring, out)

    def evaluate(self, point: Sequence[ScalarLike]):
        """Exact value at a point (one scalar per variable)."""
        if len(point) != self.ring.nvars:
            raise ValueError("point length does not match variable count")
        field = self.ring.field
        vals = [field(v) for v in point]
        total = field.zero
        for e, c in self.terms.items():
            term = c
            for k, v in zip(e, vals):
                for _ in range(k):
                    term = field.mul(term, v)
            total = field.add(total, term)
        return total

    def substitute(self, images: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials for variables (indices absent map to themselves)."""
        ring = None
        for img in images.values():
            ring = img.ring
            break
        if ring is None:
            return self
        field = ring.field
        # cache powers of each image
        cache: Dict[Tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in cache:
                base = images.get(i)
                if base is None:
                    base = ring.var(i) if i < ring.nvars else None
                    if base is None:
                        raise ValueError(f"no image for variable {i}")
                cache[(i, 1)] = base
                cache[key] = base ** k
            return cache[key]

        result = ring.zero()
        for e, c in self.terms.items():
            term = ring.const(field(c) if not isinstance(c, (int, Fraction)) else c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def set_var(self, var_index: int, value: ScalarLike) -> "Polynomial":
        """Substitute a scalar for one variable (stays in the same ring)."""
        field = self.ring.field
        v = field(value)
        out: Dict[Exponent, object] = {}
        for e, c in self.terms.items():
            k = e[var_index]
            scaled = c
            for _ in range(k):
                scaled = field.mul(scaled, v)
            if field.is_zero(scaled):
                continue
            new_e = e[:var_index] + (0,) + e[var_index + 1:]
            s = field.add(out.get(new_e, field.zero), scaled)
            if field.is_zero(s):
                out.pop(new_e, None)
            else:
                out[new_e] = s
        return Polynomial(self.ring, out)

    def map_coefficients(self, target_ring: Ring) -> "Polynomial":
        """Recoerce coefficients into another ring with the same variables."""
        if target_ring.nvars != self.ring.nvars:
            raise ValueError("variable count mismatch")
        return Polynomial.from_terms(
            target_ring, {e: _lift_scalar(self.ring.field, c) for e, c in self.terms.items()}
        )

    def coefficients_in(self, var_subset: Sequence[int]) -> Dict[Exponent, "Polynomial"]:
        """Split terms by their exponents on ``var_subset``.

        Returns a map from the restricted exponent tuple to the polynomial in
        the remaining variables (still represented in the full ring).
        """
        subset = tuple(var_subset)
        groups: Dict[Exponent, Dict[Exponent, object]] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in subset)
            rest = list(e)
            for i in subset:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        return {k: Polynomial(self.ring, v) for k, v in groups.items()}

    # -- homogenization and the inverse twist ---------------------------------

    def homogenize(self, new_var_index: int, target_degree: int) -> "Polynomial":
        """Pad every term with the given variable up to ``target_degree``."""
        out: Dict[Exponent, object] = {}
        for e, c in self.terms.items():
            deg = sum(e)
            if deg > target_degree:
                raise ValueError(f"term of degree {deg} exceeds target {target_degree}")
            new_e = list(e)
            new_e[new_var_index] += target_degree - deg
            out[tuple(new_e)] = c
        return Polynomial(self.ring, out)

    def dehomogenize(self, var_index: int) -> "Polynomial":
        return self.set_var(var_index, 1)

    def twist(self, distinguished_var: int, total_degree: int) -> "Polynomial":
        """Inverse twist of a dehomogenized form.

        For each term, the implicit exponent of the distinguished variable is
        ``total_degree - deg(term)``; the coefficient is multiplied by its
        factorial.  The input must not involve the distinguished variable.
        """
        field = self.ring.field
        out: Dict[Exponent, object] = {}
        for e, c in self.terms.items():
            if e[distinguished_var] != 0:
                raise ValueError("input involves the distinguished variable")
            residual = total_degree - sum(e)
            if residual < 0:
                raise ValueError(
                    f"term degree {sum(e)} exceeds total degree {total_degree}"
                )
            out[e] = field.mul(c, field(factorial(residual)))
        return Polynomial(self.ring, out)

    # -- printing / parsing ---------------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    __repr__ = __str__


def _lift_scalar(field: Field, c):
    if isinstance(field, QQ):
        return c
    return int(c)


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact product (functional form of ``p * q``)."""
    return p * q


def differentiate(p: Polynomial, var_index: int) -> Polynomial:
    return p.differentiate(var_index)


def evaluate(p: Polynomial, point: Sequence[ScalarLike]):
    return p.evaluate(point)


def homogenize(p: Polynomial, new_var_index: int, target_degree: int) -> Polynomial:
    return p.homogenize(new_var_index, target_degree)


def twist(f: Polynomial, distinguished_var: int, total_degree: int) -> Polynomial:
    return f.twist(distinguished_var, total_degree)


# ---------------------------------------------------------------------------
# Text format: coefficients are integers or fractions, variables are a letter
# followed by digits (braces and underscores tolerated: a_{12} == a12), `^`
# for powers, `*` optional.  Round-trips with format_polynomial.
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[a-zA-Z](?:_\{?\d+\}?|\{?\d+\}?)?)"
    r"|(?P<pow>\^)|(?P<mul>\*)|(?P<sign>[+-])|(?P<lpar>\()|(?P<rpar>\)))"
)


def _normalize_name(raw: str) -> str:
    return raw.replace("_", "").replace("{", "").replace("}", "")


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse the paper-style text format into a polynomial in ``ring``."""
    field = ring.field
    name_to_index = {name: i for i, name in enumerate(ring.names)}
    pos = 0
    n = len(text)
    result: Dict[Exponent, object] = {}

    sign = 1
    coeff = None  # Fraction accumulated for the current term
    expo = None

    def flush():
        nonlocal sign, coeff, expo
        if coeff is None and expo is None:
            return
        c = Fraction(1) if coeff is None else coeff
        e = tuple(expo) if expo is not None else (0,) * ring.nvars
        value = field(c * sign)
        if not field.is_zero(value):
            prev = result.get(e, field.zero)
            s = field.add(prev, value)
            if field.is_zero(s):
                result.pop(e, None)
            else:
                result[e] = s
        sign, coeff, expo = 1, None, None

    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"cannot tokenize {text[pos:pos+20]!r}")
        pos = m.end()
        if m.group("sign"):
            if coeff is not None or expo is not None:
                flush()
            if m.group("sign") == "-":
                sign = -sign
            continue
        if m.group("num"):
            value = Fraction(m.group("num"))
            # exponent applied to a bare number is not supported; numbers
            # following a variable block start a new implicit product only
            # when separated by '*', otherwise they multiply the coefficient.
            coeff = value if coeff is None else coeff * value
            continue
        if m.group("name"):
            name = _normalize_name(m.group("name"))
            if name not in name_to_index:
                raise ValueError(f"unknown variable {name!r} for ring {ring.names}")
            idx = name_to_index[name]
            power = 1
            m2 = _TOKEN.match(text, pos)
            if m2 and m2.group("pow"):
                pos = m2.end()
                m3 = _TOKEN.match(text, pos)
                if not m3 or not m3.group("num"):
                    raise ValueError("expected integer exponent after '^'")
                power = int(m3.group("num"))
                pos = m3.end()
            if expo is None:
                expo = [0] * ring.nvars
            expo[idx] += power
            continue
        if m.group("mul"):
            continue
        if m.group("pow"):
            raise ValueError("unexpected '^'")
        if m.group("lpar") or m.group("rpar"):
            raise ValueError("parentheses are not part of the polynomial format")
    flush()
    return Polynomial(ring, result)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form, terms in descending grevlex order."""
    if not p.terms:
        return "0"
    field = p.ring.field
    parts = []
    for e in sorted(p.terms, key=grevlex_key, reverse=True):
        c = p.terms[e]
        factors = []
        for name, k in zip(p.ring.names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        cs = field.to_str(c)
        negative = cs.startswith("-")
        mag = cs[1:] if negative else cs
        if factors and mag == "1":
            body = "*".join(factors)
        elif factors:
            body = "*".join([mag] + factors)
        else:
            body = mag
        parts.append(("-" if negative else "+", body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for s, body in parts[1:]:
        out += f"{s}{body}"
    return out
