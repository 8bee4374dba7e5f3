"""
Matrix-valued differential operators in one variable t.

Every generator the package builds (H, Dil, K, the supercharges Q_i and their
conformal partners S_i, the R-symmetry elements found by saturation) is a
``GradedOperator``: a parity-tagged square matrix whose entries are finite sums
``Σ_k c_k(t) ∂^k`` with polynomial coefficients, acting on a vector of
component fields.

Composition uses the Leibniz rule ``∂^k ∘ f = Σ_j C(k,j) f^(j) ∂^(k-j)``, so all
products are exact. Operators are flattened to sparse coefficient vectors keyed
by ``(row, col, ∂-power, t-power)`` for span membership tests.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .config import DEFAULT_POWER_CAP
from .errors import NonlocalOperatorError, ParityError, PowerCapExceeded
from .exactnum import PolyT, Scalar, format_rational

logger = logging.getLogger(__name__)

EVEN = 0
ODD = 1

Key = Tuple[int, int, int, int]
Vector = Dict[Key, Fraction]


class LambdaMarker(str, Enum):
    """Tag for operators whose λ is left symbolic (never flattened)."""
    SYMBOLIC = "symbolic"


LambdaValue = Union[Fraction, LambdaMarker, None]


@dataclass(frozen=True)
class FieldSlot:
    label: str
    parity: int
    dim_offset: Fraction

    def shifted(self, by: Scalar) -> "FieldSlot":
        return FieldSlot(self.label, self.parity, self.dim_offset + Fraction(by))

    @property
    def is_boson(self) -> bool:
        return self.parity == EVEN


@dataclass(frozen=True)
class DiffEntry:
    """A scalar differential operator ``Σ_k terms[k](t) ∂^k``; zero terms are never stored."""

    terms: Mapping[int, PolyT] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {k: p for k, p in self.terms.items() if not p.is_zero()}
        for k in clean:
            if k < 0:
                raise ValueError(f"negative d-power {k} in a local operator")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def const(cls, c: Scalar, power: int = 0) -> "DiffEntry":
        return cls({power: PolyT.constant(c)})

    @classmethod
    def poly(cls, p: PolyT, power: int = 0) -> "DiffEntry":
        return cls({power: p})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def max_power(self) -> int:
        return max(self.terms, default=-1)

    @property
    def t_degree(self) -> int:
        return max((p.degree for p in self.terms.values()), default=-1)

    def __add__(self, other: "DiffEntry") -> "DiffEntry":
        out = dict(self.terms)
        for k, p in other.terms.items():
            out[k] = out[k] + p if k in out else p
        return DiffEntry(out)

    def __neg__(self) -> "DiffEntry":
        return DiffEntry({k: -p for k, p in self.terms.items()})

    def __sub__(self, other: "DiffEntry") -> "DiffEntry":
        return self + (-other)

    def scale(self, c: Scalar) -> "DiffEntry":
        if c == 0:
            return DiffEntry()
        return DiffEntry({k: p * Fraction(c) for k, p in self.terms.items()})

    def compose(self, other: "DiffEntry") -> "DiffEntry":
        """``self ∘ other`` by the Leibniz rule."""
        out: Dict[int, PolyT] = {}
        for k, f in self.terms.items():
            for j, g in other.terms.items():
                deriv = g
                for m in range(k + 1):
                    if deriv.is_zero():
                        break
                    power = k - m + j
                    term = f * deriv * comb(k, m)
                    out[power] = out[power] + term if power in out else term
                    deriv = deriv.derivative()
        return DiffEntry(out)

    def to_text(self) -> str:
        """Canonical form: ``"c * t^a * d^k"`` terms sorted by (k, a) descending."""
        items = []
        for k, p in self.terms.items():
            for a, c in enumerate(p.coeffs):
                if c != 0:
                    items.append((k, a, c))
        if not items:
            return "0"
        items.sort(key=lambda x: (x[0], x[1]), reverse=True)
        return " + ".join(f"{format_rational(c)} * t^{a} * d^{k}" for k, a, c in items)


def _merge_lambda(a: LambdaValue, b: LambdaValue) -> LambdaValue:
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise ValueError(f"operators carry different lambda values ({a} vs {b})")


@dataclass(frozen=True)
class GradedOperator:
    """Square matrix of ``DiffEntry`` over ``slots``; sparse, keyed by (row, col)."""

    parity: int
    slots: Tuple[FieldSlot, ...]
    entries: Mapping[Tuple[int, int], DiffEntry] = field(default_factory=dict)
    lambda_value: LambdaValue = None

    def __post_init__(self) -> None:
        n = len(self.slots)
        clean: Dict[Tuple[int, int], DiffEntry] = {}
        for (r, c), e in self.entries.items():
            if e.is_zero():
                continue
            if not (0 <= r < n and 0 <= c < n):
                raise IndexError(f"entry ({r},{c}) outside a {n}x{n} operator")
            if (self.slots[r].parity ^ self.slots[c].parity) != self.parity:
                raise ParityError(
                    f"entry ({r},{c}) links {self.slots[r].label}/{self.slots[c].label} "
                    f"but operator parity is {self.parity}"
                )
            clean[(r, c)] = e
        object.__setattr__(self, "slots", tuple(self.slots))
        object.__setattr__(self, "entries", clean)

    @property
    def size(self) -> int:
        return len(self.slots)

    def is_zero(self) -> bool:
        return not self.entries

    @property
    def max_power(self) -> int:
        return max((e.max_power for e in self.entries.values()), default=-1)

    @property
    def t_degree(self) -> int:
        return max((e.t_degree for e in self.entries.values()), default=-1)

    def is_t_independent(self) -> bool:
        return self.t_degree <= 0

    def _check_compatible(self, other: "GradedOperator") -> None:
        if self.slots != other.slots:
            raise ValueError("operators act on different slot lists")

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        self._check_compatible(other)
        if self.parity != other.parity and not (self.is_zero() or other.is_zero()):
            raise ParityError("cannot add operators of different parity")
        parity = self.parity if not self.is_zero() else other.parity
        out = dict(self.entries)
        for pos, e in other.entries.items():
            out[pos] = out[pos] + e if pos in out else e
        return GradedOperator(parity, self.slots, out, _merge_lambda(self.lambda_value, other.lambda_value))

    def __neg__(self) -> "GradedOperator":
        return self.scale(-1)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + (-other)

    def scale(self, c: Scalar) -> "GradedOperator":
        return GradedOperator(
            self.parity, self.slots, {pos: e.scale(c) for pos, e in self.entries.items()}, self.lambda_value
        )

    def with_lambda(self, value: LambdaValue) -> "GradedOperator":
        return GradedOperator(self.parity, self.slots, self.entries, value)

    def permuted(self, order: Sequence[int]) -> "GradedOperator":
        """Reorder slots: new slot i is old slot ``order[i]``."""
        where = {old: new for new, old in enumerate(order)}
        slots = tuple(self.slots[i] for i in order)
        entries = {(where[r], where[c]): e for (r, c), e in self.entries.items()}
        return GradedOperator(self.parity, slots, entries, self.lambda_value)

    def to_text(self) -> str:
        lines = [f"[{r},{c}] {self.entries[(r, c)].to_text()}" for r, c in sorted(self.entries)]
        return "\n".join(lines) if lines else "0"


def identity(slots: Sequence[FieldSlot], power: int = 0, coeff: Scalar = 1) -> GradedOperator:
    """``coeff · ∂^power · 𝟙``; ``identity(slots, 1)`` is H."""
    return GradedOperator(EVEN, tuple(slots), {(i, i): DiffEntry.const(coeff, power) for i in range(len(slots))})


def diagonal(slots: Sequence[FieldSlot], items: Sequence[DiffEntry], lambda_value: LambdaValue = None) -> GradedOperator:
    return GradedOperator(EVEN, tuple(slots), {(i, i): e for i, e in enumerate(items)}, lambda_value)


def zero_like(a: GradedOperator, parity: Optional[int] = None) -> GradedOperator:
    return GradedOperator(a.parity if parity is None else parity, a.slots, {}, a.lambda_value)


def compose(a: GradedOperator, b: GradedOperator, power_cap: int = DEFAULT_POWER_CAP) -> GradedOperator:
    """
    Operator product ``a ∘ b``.

    Raises:
        PowerCapExceeded: the product carries a ∂-power above ``power_cap``.
    """
    a._check_compatible(b)
    rows_of_b: Dict[int, List[Tuple[int, DiffEntry]]] = {}
    for (k, c), e in b.entries.items():
        rows_of_b.setdefault(k, []).append((c, e))
    acc: Dict[Tuple[int, int], DiffEntry] = {}
    for (r, k), ea in a.entries.items():
        for c, eb in rows_of_b.get(k, ()):
            prod = ea.compose(eb)
            acc[(r, c)] = acc[(r, c)] + prod if (r, c) in acc else prod
    out = GradedOperator(a.parity ^ b.parity, a.slots, acc, _merge_lambda(a.lambda_value, b.lambda_value))
    if out.max_power > power_cap:
        raise PowerCapExceeded(out.max_power, power_cap)
    return out


def graded_bracket(a: GradedOperator, b: GradedOperator, power_cap: int = DEFAULT_POWER_CAP) -> GradedOperator:
    """``a∘b − (−1)^(|a||b|) b∘a``: anticommutator for two odd operators, commutator otherwise."""
    ab = compose(a, b, power_cap)
    ba = compose(b, a, power_cap)
    out = ab + ba if (a.parity and b.parity) else ab - ba
    if out.is_zero():
        out = zero_like(out, a.parity ^ b.parity)
    if out.parity != a.parity ^ b.parity:
        raise ParityError("bracket parity bookkeeping violated")
    return out


def combine(terms: Iterable[Tuple[Scalar, GradedOperator]]) -> GradedOperator:
    """Linear combination ``Σ c_i · op_i``."""
    out: Optional[GradedOperator] = None
    for c, op in terms:
        piece = op.scale(c)
        out = piece if out is None else out + piece
    if out is None:
        raise ValueError("empty combination")
    return out


def flatten(a: GradedOperator) -> Vector:
    """Sparse coefficient vector keyed by (row, col, ∂-power, t-power)."""
    if a.lambda_value is LambdaMarker.SYMBOLIC:
        raise ValueError("cannot flatten an operator with symbolic lambda")
    vec: Vector = {}
    for (r, c), e in a.entries.items():
        for k, p in e.terms.items():
            for t_pow, coeff in enumerate(p.coeffs):
                if coeff != 0:
                    vec[(r, c, k, t_pow)] = coeff
    return dict(sorted(vec.items()))


def _axpy(target: Dict, coeff: Fraction, vec: Mapping) -> None:
    """``target += coeff * vec`` in place, dropping zeros."""
    if coeff == 0:
        return
    for k, v in vec.items():
        nv = target.get(k, 0) + coeff * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class EchelonBasis:
    """
    Incremental row-echelon form over the rationals.

    Each stored row keeps its pivot key, the (pivot-normalised) vector and the
    combination of inserted basis vectors it equals, so reductions report
    coordinates against the original basis.
    """

    def __init__(self) -> None:
        self._rows: List[Tuple[object, Dict, Dict[int, Fraction]]] = []
        self._count = 0

    def __len__(self) -> int:
        return self._count

    def reduce(self, candidate: Mapping) -> Tuple[bool, Dict, Dict[int, Fraction]]:
        residual = {k: Fraction(v) for k, v in candidate.items() if v}
        coords: Dict[int, Fraction] = {}
        for pivot, vec, combo in self._rows:
            c = residual.get(pivot)
            if c:
                _axpy(residual, -c, vec)
                _axpy(coords, c, combo)
        return (not residual), residual, coords

    def insert(self, vector: Mapping) -> bool:
        """Append ``vector`` as basis element ``len(self)``; False (and no change) if dependent."""
        in_span, residual, coords = self.reduce(vector)
        if in_span:
            return False
        pivot = min(residual)
        scale = 1 / residual[pivot]
        combo: Dict[int, Fraction] = {self._count: Fraction(1)}
        _axpy(combo, Fraction(-1), coords)
        self._rows.append((pivot, {k: v * scale for k, v in residual.items()}, {k: v * scale for k, v in combo.items()}))
        self._count += 1
        return True


def span_reduce(basis: Sequence[Mapping], candidate: Mapping) -> Tuple[bool, Dict, List[Fraction]]:
    """
    Exact Gaussian reduction of ``candidate`` against linearly independent ``basis``.

    Returns ``(in_span, residual, coords)`` with
    ``candidate = Σ coords[i] · basis[i] + residual``.
    """
    eb = EchelonBasis()
    for v in basis:
        if not eb.insert(v):
            raise ValueError("basis vectors are linearly dependent")
    in_span, residual, coords = eb.reduce(candidate)
    return in_span, residual, [coords.get(i, Fraction(0)) for i in range(len(basis))]


# --- constant-coefficient Laurent operators (dressing) ----------------------------

@dataclass(frozen=True)
class ConstLaurentOperator:
    """Matrix of t-independent Laurent polynomials in ∂; entries map ∂-power → coefficient."""

    parity: int
    slots: Tuple[FieldSlot, ...]
    entries: Mapping[Tuple[int, int], Mapping[int, Fraction]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for pos, terms in self.entries.items():
            t = {k: Fraction(v) for k, v in terms.items() if v}
            if t:
                clean[pos] = t
        object.__setattr__(self, "slots", tuple(self.slots))
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_graded(cls, op: GradedOperator) -> "ConstLaurentOperator":
        if not op.is_t_independent():
            raise ValueError("dressing needs t-independent operators")
        entries = {
            pos: {k: p.coeffs[0] for k, p in e.terms.items()}
            for pos, e in op.entries.items()
        }
        return cls(op.parity, op.slots, entries)

    @classmethod
    def diagonal_powers(cls, slots: Sequence[FieldSlot], powers: Sequence[int]) -> "ConstLaurentOperator":
        return cls(EVEN, tuple(slots), {(i, i): {p: Fraction(1)} for i, p in enumerate(powers)})

    def with_slots(self, slots: Sequence[FieldSlot]) -> "ConstLaurentOperator":
        return ConstLaurentOperator(self.parity, tuple(slots), self.entries)

    def compose(self, other: "ConstLaurentOperator") -> "ConstLaurentOperator":
        if len(self.slots) != len(other.slots):
            raise ValueError("size mismatch")
        rows_of_b: Dict[int, List[Tuple[int, Mapping[int, Fraction]]]] = {}
        for (k, c), e in other.entries.items():
            rows_of_b.setdefault(k, []).append((c, e))
        acc: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (r, k), ea in self.entries.items():
            for c, eb in rows_of_b.get(k, ()):
                cell = acc.setdefault((r, c), {})
                for pa, ca in ea.items():
                    for pb, cb in eb.items():
                        cell[pa + pb] = cell.get(pa + pb, 0) + ca * cb
        return ConstLaurentOperator(self.parity ^ other.parity, self.slots, acc)


def localize(a: ConstLaurentOperator) -> GradedOperator:
    """
    Convert back to a local ``GradedOperator``.

    Raises:
        NonlocalOperatorError: some entry keeps a negative ∂-power.
    """
    entries: Dict[Tuple[int, int], DiffEntry] = {}
    for pos in sorted(a.entries):
        terms = a.entries[pos]
        low = min(terms)
        if low < 0:
            raise NonlocalOperatorError(pos, low)
        entries[pos] = DiffEntry({k: PolyT.constant(c) for k, c in terms.items()})
    return GradedOperator(a.parity, a.slots, entries)
