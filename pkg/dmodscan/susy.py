"""
Global N-extended supersymmetry as D-module representations.

A root multiplet (N bosons at offset 0, N fermions at offset 1/2) is built from
a minimal real Clifford family; other field contents come from dressing, i.e.
conjugating the supercharges by a diagonal operator with ∂ at the dressed
slots. The N=7 multiplet (1,7,7,1) is the N=8 root with seven bosons and the
e_0 fermion dressed; the σ=𝟙 supercharge turns nonlocal and drops out.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .diffop import (
    EVEN,
    ODD,
    ConstLaurentOperator,
    DiffEntry,
    FieldSlot,
    GradedOperator,
    graded_bracket,
    identity,
    localize,
)
from .errors import CliffordError, ConstructionError, ContentError, NonlocalOperatorError

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[Fraction, ...], ...]

# e_i e_j = e_k for each cyclic triple, e_j e_i = -e_k, e_i e_i = -e_0.
OCTONION_TRIPLES: Tuple[Tuple[int, int, int], ...] = (
    (1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5),
)
QUATERNION_TRIPLES: Tuple[Tuple[int, int, int], ...] = ((1, 2, 3),)

SUPPORTED_FAMILIES = ((0, 1), (1, 2), (3, 4), (7, 8))


def _identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n))
        for i in range(n)
    )


@dataclass(frozen=True)
class CliffordFamily:
    """Real n×n matrices γ_1..γ_m, antisymmetric, with γ_iγ_j + γ_jγ_i = −2δ_ij 𝟙."""

    n: int
    gammas: Tuple[Matrix, ...]

    @property
    def m(self) -> int:
        return len(self.gammas)

    def violations(self) -> List[str]:
        """Every failed Clifford relation, as human-readable strings; empty when the family is valid."""
        out: List[str] = []
        minus_two = tuple(tuple(-2 * v for v in row) for row in _identity(self.n))
        zero = tuple(tuple(Fraction(0) for _ in range(self.n)) for _ in range(self.n))
        for i, g in enumerate(self.gammas, start=1):
            if len(g) != self.n or any(len(row) != self.n for row in g):
                out.append(f"gamma_{i} is not {self.n}x{self.n}")
                continue
            if any(g[r][c] != -g[c][r] for r in range(self.n) for c in range(self.n)):
                out.append(f"gamma_{i} is not antisymmetric")
        if out:
            return out
        for i, gi in enumerate(self.gammas, start=1):
            for j, gj in enumerate(self.gammas, start=1):
                if j < i:
                    continue
                a, b = _matmul(gi, gj), _matmul(gj, gi)
                s = tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))
                if s != (minus_two if i == j else zero):
                    out.append(f"gamma_{i}^2 != -1" if i == j else f"{{gamma_{i}, gamma_{j}}} != 0")
        return out

    def conjugated(self, perm: Sequence[int], signs: Sequence[int]) -> "CliffordFamily":
        """Conjugate by the signed permutation P with P[i, perm[i]] = signs[i]."""
        if sorted(perm) != list(range(self.n)) or len(signs) != self.n:
            raise ValueError("perm must be a permutation of range(n) with one sign per row")
        gammas = tuple(
            tuple(
                tuple(Fraction(signs[r] * signs[c]) * g[perm[r]][perm[c]] for c in range(self.n))
                for r in range(self.n)
            )
            for g in self.gammas
        )
        return CliffordFamily(self.n, gammas)


def _left_multiplication(dim: int, triples: Iterable[Tuple[int, int, int]]) -> Tuple[Matrix, ...]:
    """Matrices of x ↦ e_i x on (e_0..e_{dim-1}) for the imaginary units i = 1..dim-1."""
    table: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for i in range(dim):
        table[(0, i)] = (1, i)
        table[(i, 0)] = (1, i)
    for i in range(1, dim):
        table[(i, i)] = (-1, 0)
    for a, b, c in triples:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            table[(x, y)] = (1, z)
            table[(y, x)] = (-1, z)
    gammas = []
    for i in range(1, dim):
        rows = [[Fraction(0)] * dim for _ in range(dim)]
        for j in range(dim):
            if (i, j) not in table:
                raise CliffordError(dim - 1, dim, f"multiplication table has no entry for e_{i} e_{j}")
            sign, k = table[(i, j)]
            rows[k][j] += sign
        gammas.append(tuple(tuple(r) for r in rows))
    return tuple(gammas)


def clifford_generators(
    m: int,
    n: int,
    triples: Optional[Sequence[Tuple[int, int, int]]] = None,
) -> CliffordFamily:
    """
    Minimal real Clifford family for the supported (m, n).

    Args:
        m: number of generators
        n: matrix size
        triples: override the octonion/quaternion multiplication triples (used to inject bad tables)

    Raises:
        CliffordError: unsupported (m, n), or the resulting family violates a Clifford relation.
    """
    if (m, n) not in SUPPORTED_FAMILIES:
        raise CliffordError(m, n)
    if (m, n) == (0, 1):
        family = CliffordFamily(1, ())
    elif (m, n) == (1, 2):
        eps = ((Fraction(0), Fraction(1)), (Fraction(-1), Fraction(0)))
        family = CliffordFamily(2, (eps,))
    elif (m, n) == (3, 4):
        family = CliffordFamily(4, _left_multiplication(4, triples or QUATERNION_TRIPLES))
    else:
        family = CliffordFamily(8, _left_multiplication(8, triples or OCTONION_TRIPLES))
    bad = family.violations()
    if bad:
        raise CliffordError(m, n, "; ".join(bad))
    return family


# --- field content ----------------------------------------------------------------

_CONTENT_RE = re.compile(r"^\(?\s*\d+(\s*,\s*\d+)+\s*\)?$")


@dataclass(frozen=True)
class FieldContent:
    """Field counts at offsets 0, 1/2, 1, ...; even positions are bosons, odd positions fermions."""

    counts: Tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if len(counts) < 2 or any(c < 0 for c in counts):
            raise ContentError(f"malformed field content {counts}")
        bosons = sum(counts[0::2])
        fermions = sum(counts[1::2])
        if bosons != fermions or bosons == 0:
            raise ContentError(f"field content {counts} has {bosons} bosons and {fermions} fermions")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def parse(cls, text: str) -> "FieldContent":
        """
        Accept ``"D,N"`` shorthand for (D, N, N−D) or a full tuple such as ``"(1,7,7,1)"``.
        """
        s = (text or "").strip()
        if not _CONTENT_RE.match(s):
            raise ContentError(f"cannot parse field content {text!r}")
        nums = [int(x) for x in s.strip("()").split(",")]
        if len(nums) == 2:
            d, n = nums
            if d > n:
                raise ContentError(f"D={d} exceeds N={n}")
            nums = [d, n, n - d]
        return cls(tuple(nums))

    @classmethod
    def from_slots(cls, slots: Sequence[FieldSlot]) -> "FieldContent":
        positions = [int(s.dim_offset * 2) for s in slots]
        counts = [0] * (max(positions) + 1)
        for p in positions:
            counts[p] += 1
        return cls(tuple(counts))

    @property
    def trimmed(self) -> Tuple[int, ...]:
        c = list(self.counts)
        while len(c) > 2 and c[-1] == 0:
            c.pop()
        return tuple(c)

    @property
    def n_susy(self) -> int:
        return self.counts[1]

    @property
    def label(self) -> str:
        return "(" + ",".join(str(c) for c in self.counts) + ")"

    def __str__(self) -> str:
        return self.label


# --- multiplets -------------------------------------------------------------------

@dataclass(frozen=True)
class GlobalMultiplet:
    content: FieldContent
    slots: Tuple[FieldSlot, ...]
    supercharges: Tuple[GradedOperator, ...]
    charge_index: Tuple[int, ...] = ()
    discarded: Tuple[int, ...] = ()

    @property
    def n_susy(self) -> int:
        return len(self.supercharges)

    def hamiltonian(self) -> GradedOperator:
        return identity(self.slots, 1)

    def relation_failures(self) -> List[str]:
        """Check odd parity, the half-unit scaling rule and {Q_i,Q_j} = 2δ_ij H."""
        out: List[str] = []
        h2 = self.hamiltonian().scale(2)
        half = Fraction(1, 2)
        for i, q in enumerate(self.supercharges, start=1):
            if q.parity != ODD:
                out.append(f"Q{i} is not odd")
            for (r, c), e in q.entries.items():
                for k in e.terms:
                    if self.slots[r].dim_offset + half != self.slots[c].dim_offset + k:
                        out.append(f"Q{i} entry ({r},{c}) d^{k} breaks the scaling rule")
        for i, qi in enumerate(self.supercharges):
            for j in range(i, len(self.supercharges)):
                b = graded_bracket(qi, self.supercharges[j])
                expected = h2 if i == j else identity(self.slots, 0, 0)
                if b.entries != expected.entries:
                    out.append(f"{{Q{i + 1},Q{j + 1}}} != {'2H' if i == j else '0'}")
        return out

    def verify(self) -> "GlobalMultiplet":
        bad = self.relation_failures()
        if bad:
            raise ConstructionError("{Q_i,Q_j} = 2 delta_ij H", "; ".join(bad[:3]))
        return self


def build_root(n_susy: int, family: Optional[CliffordFamily] = None) -> GlobalMultiplet:
    """The (N, N) root multiplet; Q_i uses σ_i = γ_i for i < N and σ_N = 𝟙."""
    if n_susy not in (1, 2, 4, 8):
        raise CliffordError(n_susy - 1, n_susy)
    if family is None:
        family = clifford_generators(n_susy - 1, n_susy)
    if family.n != n_susy or family.m != n_susy - 1:
        raise CliffordError(family.m, family.n, f"family does not fit N={n_susy}")

    n = n_susy
    slots = tuple(FieldSlot(f"x{i + 1}", EVEN, Fraction(0)) for i in range(n)) + tuple(
        FieldSlot(f"psi{i + 1}", ODD, Fraction(1, 2)) for i in range(n)
    )
    sigmas = list(family.gammas) + [_identity(n)]
    charges = []
    for sigma in sigmas:
        entries = {}
        for a in range(n):
            for b in range(n):
                if sigma[a][b]:
                    entries[(a, n + b)] = DiffEntry.const(sigma[a][b])
                if sigma[b][a]:
                    entries[(n + a, b)] = DiffEntry.const(sigma[b][a], 1)
        charges.append(GradedOperator(ODD, slots, entries))
    return GlobalMultiplet(
        FieldContent((n, n)), slots, tuple(charges), charge_index=tuple(range(1, n + 1))
    )


def _canonical_order(slots: Sequence[FieldSlot]) -> List[int]:
    """Bosons ascending by offset, then fermions ascending by offset; stable otherwise."""
    return sorted(range(len(slots)), key=lambda i: (slots[i].parity, slots[i].dim_offset, i))


def dress(
    root: GlobalMultiplet,
    boson_dress: Iterable[int],
    fermion_dress: Iterable[int] = (),
) -> GlobalMultiplet:
    """
    Conjugate every supercharge by T = diag(∂ at dressed slots, 1 elsewhere).

    Indices are 1-based within the bosons and within the fermions of ``root``.
    Supercharges that pick up a ∂⁻¹ are dropped and listed in ``discarded``.
    """
    bosons = [i for i, s in enumerate(root.slots) if s.parity == EVEN]
    fermions = [i for i, s in enumerate(root.slots) if s.parity == ODD]
    dressed: FrozenSet[int] = frozenset(
        [bosons[i - 1] for i in boson_dress] + [fermions[i - 1] for i in fermion_dress]
    )
    powers = [1 if i in dressed else 0 for i in range(len(root.slots))]
    new_slots = tuple(s.shifted(p) for s, p in zip(root.slots, powers))

    t = ConstLaurentOperator.diagonal_powers(new_slots, powers)
    t_inv = ConstLaurentOperator.diagonal_powers(new_slots, [-p for p in powers])
    order = _canonical_order(new_slots)

    kept, kept_index, dropped = [], [], []
    for idx, q in zip(root.charge_index or range(1, root.n_susy + 1), root.supercharges):
        laurent = ConstLaurentOperator.from_graded(q).with_slots(new_slots)
        try:
            local = localize(t.compose(laurent).compose(t_inv))
        except NonlocalOperatorError as e:
            logger.debug("Q%d discarded after dressing: %s", idx, e)
            dropped.append(idx)
            continue
        kept.append(local.permuted(order))
        kept_index.append(idx)

    slots = tuple(new_slots[i] for i in order)
    return GlobalMultiplet(
        FieldContent.from_slots(slots),
        slots,
        tuple(kept),
        charge_index=tuple(kept_index),
        discarded=tuple(dropped),
    )


def build_global(content: FieldContent, family: Optional[CliffordFamily] = None) -> GlobalMultiplet:
    """(D, N, N−D) from the N root by dressing its last N−D bosons."""
    counts = content.counts
    if len(counts) not in (2, 3):
        raise ContentError(f"{content} is not of the form (D, N, N-D)")
    d, n = counts[0], counts[1]
    rest = counts[2] if len(counts) == 3 else 0
    if n not in (1, 2, 4, 8) or d + rest != n:
        raise ContentError(f"{content} is not of the form (D, N, N-D) with N in 1,2,4,8")
    m = dress(build_root(n, family), range(d + 1, n + 1))
    if m.discarded:
        raise ConstructionError("locality", f"{content} lost supercharges {m.discarded}")
    return GlobalMultiplet(content, m.slots, m.supercharges, m.charge_index, m.discarded).verify()


def build_n7(family: Optional[CliffordFamily] = None) -> GlobalMultiplet:
    """(1,7,7,1): N=8 root, bosons 2..8 and fermion 1 dressed; seven supercharges stay local."""
    m = dress(build_root(8, family), range(2, 9), (1,))
    if m.n_susy != 7:
        raise ConstructionError("N=7 construction", f"{m.n_susy} supercharges survive")
    logger.debug("N=7 multiplet: kept %s, discarded %s", m.charge_index, m.discarded)
    return m.verify()


N7_CONTENT = (1, 7, 7, 1)


def build_multiplet(content: FieldContent, family: Optional[CliffordFamily] = None) -> GlobalMultiplet:
    """Dispatch to ``build_n7`` or ``build_global``."""
    if content.counts == N7_CONTENT:
        return build_n7(family)
    return build_global(content, family)
