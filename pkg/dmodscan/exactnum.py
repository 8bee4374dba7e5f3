"""
Exact scalar arithmetic for dmodscan.

Rationals are Python's ``Fraction``; polynomials are dense coefficient tuples,
lowest power first. Nothing in this module touches floating point: criticality
is decided by exact vanishing, never by tolerance.

Also hosts the handful of dense linear-algebra helpers (rank, nullspace,
inverse) the identification stage needs on small rational matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import zip_longest
from typing import ClassVar, List, Sequence, Tuple, TypeVar, Union

from .errors import DegreeBoundExceeded, ZeroPolynomialError

Rational = Fraction
Scalar = Union[int, Fraction]

P = TypeVar("P", bound="Poly")

_SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def format_rational(q: Scalar) -> str:
    """Serialize as ``"p/q"`` in lowest terms, ``"p"`` when q == 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    s = (text or "").strip()
    if not s:
        raise ValueError("empty rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational: {text!r}") from e


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial over the rationals; ``coeffs[k]`` multiplies ``var**k``."""

    coeffs: Tuple[Fraction, ...] = ()
    var: ClassVar[str] = "x"

    def __post_init__(self) -> None:
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls: type[P], c: Scalar) -> P:
        return cls((Fraction(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _lift(self: P, other: object) -> P:
        if isinstance(other, Poly):
            if type(other) is not type(self):
                raise TypeError(f"cannot mix {type(self).__name__} and {type(other).__name__}")
            return other  # type: ignore[return-value]
        if isinstance(other, (int, Fraction)):
            return type(self).constant(other)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self: P, other: object) -> P:
        o = self._lift(other)
        return type(self)(tuple(a + b for a, b in zip_longest(self.coeffs, o.coeffs, fillvalue=Fraction(0))))

    __radd__ = __add__

    def __neg__(self: P) -> P:
        return type(self)(tuple(-c for c in self.coeffs))

    def __sub__(self: P, other: object) -> P:
        return self + (-self._lift(other))

    def __rsub__(self: P, other: object) -> P:
        return self._lift(other) - self

    def __mul__(self: P, other: object) -> P:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return type(self)()
            return type(self)(tuple(c * other for c in self.coeffs))
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return type(self)()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    out[i + j] += a * b
        return type(self)(tuple(out))

    __rmul__ = __mul__

    def derivative(self: P) -> P:
        return type(self)(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def monic(self: P) -> P:
        if self.is_zero():
            return self
        lead = self.leading
        return type(self)(tuple(c / lead for c in self.coeffs))

    def __divmod__(self: P, other: object) -> Tuple[P, P]:
        d = self._lift(other)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(0, len(rem) - len(d.coeffs) + 1)
        lead = d.leading
        for shift in range(len(rem) - len(d.coeffs), -1, -1):
            f = rem[shift + d.degree] / lead
            if f == 0:
                continue
            quot[shift] = f
            for k, c in enumerate(d.coeffs):
                rem[shift + k] -= f * c
        return type(self)(tuple(quot)), type(self)(tuple(rem))

    def __floordiv__(self: P, other: object) -> P:
        return divmod(self, other)[0]

    def __mod__(self: P, other: object) -> P:
        return divmod(self, other)[1]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts: List[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            body = "" if (mag == 1 and k > 0) else format_rational(mag)
            if k >= 1:
                body += self.var
            if k >= 2:
                body += str(k).translate(_SUPERSCRIPT)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)


class PolyLambda(Poly):
    """Polynomial in the scaling parameter λ."""

    var: ClassVar[str] = "λ"


class PolyT(Poly):
    """Polynomial in the time variable t."""

    var: ClassVar[str] = "t"


def _integer_coefficients(p: Poly) -> List[int]:
    """Clear denominators and the integer content; the result is primitive."""
    den = 1
    for c in p.coeffs:
        den = math.lcm(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    return [a // g for a in ints] if g > 1 else ints


def _divisors(n: int) -> List[int]:
    n = abs(n)
    if n == 0:
        return []
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def poly_rational_roots(p: PolyLambda) -> frozenset[Fraction]:
    """
    Exact rational roots of ``p`` by the rational-root theorem.

    Raises:
        ZeroPolynomialError: ``p`` is identically zero.
    """
    if p.is_zero():
        raise ZeroPolynomialError()
    ints = _integer_coefficients(p)
    roots = set()
    while ints and ints[0] == 0:
        roots.add(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return frozenset(roots)
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for sign in (1, -1):
                r = Fraction(sign * num, den)
                if r not in roots and p(r) == 0:
                    roots.add(r)
    return frozenset(roots)


def interpolate(samples: Sequence[Tuple[Scalar, Scalar]], degree_bound: int) -> PolyLambda:
    """
    Newton interpolation through the first ``degree_bound + 1`` samples.

    Any further samples act as controls: the polynomial must pass through them
    too, otherwise ``DegreeBoundExceeded`` is raised and the caller retries
    with a larger bound.
    """
    pts = [(Fraction(x), Fraction(y)) for x, y in samples]
    if degree_bound < 0 or len(pts) < degree_bound + 1:
        raise ValueError(f"need at least {degree_bound + 1} samples, got {len(pts)}")
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("sample abscissae must be distinct")

    head = pts[: degree_bound + 1]
    table = [y for _, y in head]
    n = len(head)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (head[i][0] - head[i - level][0])

    poly = PolyLambda.constant(table[-1])
    for k in range(n - 2, -1, -1):
        poly = poly * PolyLambda((-head[k][0], Fraction(1))) + table[k]

    for x, y in pts[degree_bound + 1:]:
        if poly(x) != y:
            raise DegreeBoundExceeded(degree_bound)
    return poly


def poly_gcd(p: P, q: P) -> P:
    """Monic greatest common divisor over the rationals."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# --- dense exact linear algebra -------------------------------------------------

Matrix = List[List[Fraction]]


def rref(rows: Sequence[Sequence[Scalar]]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return m, []
    n_cols = len(m[0])
    pivots: List[int] = []
    piv_r = 0
    for piv_c in range(n_cols):
        hit = next((r for r in range(piv_r, len(m)) if m[r][piv_c] != 0), None)
        if hit is None:
            continue
        m[piv_r], m[hit] = m[hit], m[piv_r]
        fp = m[piv_r][piv_c]
        m[piv_r] = [v / fp for v in m[piv_r]]
        for r in range(len(m)):
            if r != piv_r and m[r][piv_c] != 0:
                fr = m[r][piv_c]
                m[r] = [a - fr * b for a, b in zip(m[r], m[piv_r])]
        pivots.append(piv_c)
        piv_r += 1
        if piv_r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Scalar]], n_cols: int) -> Matrix:
    """Basis of {x : rows · x = 0}, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    m, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis: Matrix = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(v)
    return basis


def inverse(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    n = len(rows)
    aug = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in m]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]
