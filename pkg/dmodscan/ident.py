"""
Identification of closed superalgebras.

``extract_constants`` turns a closed saturation basis into exact structure
constants; ``super_jacobi`` and ``killing_form`` check the axioms; ``identify``
matches the (N, even|odd) signature against the superconformal catalogue and
``extract_alpha`` recovers the D(2,1;α) parameter as an S₃ orbit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from .diffop import ODD, EchelonBasis, flatten, graded_bracket
from .errors import InconsistencyError, SignatureError
from .exactnum import Poly, format_rational, inverse, nullspace, poly_rational_roots, rank

if TYPE_CHECKING:
    from .scf import SaturationReport

logger = logging.getLogger(__name__)

Element = Dict[int, Fraction]
Constants = Mapping[Tuple[int, int], Tuple[Tuple[int, Fraction], ...]]


def _sign(pa: int, pb: int) -> int:
    return -1 if (pa and pb) else 1


def _add_into(target: Element, coeff: Fraction, vec: Mapping[int, Fraction]) -> None:
    for k, v in vec.items():
        nv = target.get(k, 0) + coeff * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


@dataclass(frozen=True)
class ClosedSuperalgebra:
    """
    Finite Lie superalgebra in an ordered basis.

    ``constants[(a, b)]`` lists ``(c, f)`` with ``[e_a, e_b] = Σ f e_c``; both
    orders of every pair are stored.
    """

    labels: Tuple[str, ...]
    parities: Tuple[int, ...]
    constants: Constants
    n_susy: int
    lambda_value: Optional[Fraction] = None
    content: Optional[str] = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def even_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.parities) if p != ODD]

    @property
    def odd_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.parities) if p == ODD]

    @property
    def even_dim(self) -> int:
        return len(self.even_indices)

    @property
    def odd_dim(self) -> int:
        return len(self.odd_indices)

    @property
    def signature(self) -> str:
        return f"{self.even_dim}|{self.odd_dim}"

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Element:
        """Bilinear extension of the basis brackets to (homogeneous) elements."""
        out: Element = {}
        for a, xa in x.items():
            for b, yb in y.items():
                for c, f in self.constants.get((a, b), ()):
                    _add_into(out, xa * yb, {c: f})
        return out

    def unit(self, i: int) -> Element:
        return {i: Fraction(1)}

    def with_constant(self, a: int, b: int, c: int, value: Fraction) -> "ClosedSuperalgebra":
        """Copy with the single constant ``[e_a, e_b]_c`` replaced (mutation hook for tests)."""
        consts = dict(self.constants)
        row = {k: v for k, v in consts.get((a, b), ())}
        row[c] = Fraction(value)
        consts[(a, b)] = tuple(sorted((k, v) for k, v in row.items() if v))
        return ClosedSuperalgebra(self.labels, self.parities, consts, self.n_susy, self.lambda_value, self.content)

    def weights(self) -> List[Fraction]:
        """Eigenvalues of ad Dil on the basis."""
        dil = self.index("Dil")
        out = []
        for i in range(self.dim):
            row = dict(self.constants.get((dil, i), ()))
            if set(row) - {i}:
                raise InconsistencyError(f"{self.labels[i]} is not an eigenvector of ad Dil")
            out.append(row.get(i, Fraction(0)))
        return out

    def structure_table(self) -> List[Tuple[int, int, int, Fraction]]:
        """``(a, b, c, f)`` for a ≤ b, sorted."""
        rows = []
        for (a, b), terms in self.constants.items():
            if a <= b:
                rows.extend((a, b, c, f) for c, f in terms)
        return sorted(rows)


def extract_constants(report: "SaturationReport") -> ClosedSuperalgebra:
    """
    Reduce every pairwise bracket of a closed basis against that basis.

    Raises:
        InconsistencyError: the report is not closed, or some bracket leaves the span.
    """
    if not report.closed:
        raise InconsistencyError("cannot extract constants from an open saturation")
    ops = list(report.basis)
    eb = EchelonBasis()
    for op in ops:
        if not eb.insert(flatten(op)):
            raise InconsistencyError("saturation basis is linearly dependent")
    consts: Dict[Tuple[int, int], Tuple[Tuple[int, Fraction], ...]] = {}
    for a in range(len(ops)):
        for b in range(a, len(ops)):
            x = graded_bracket(ops[a], ops[b])
            in_span, residual, coords = eb.reduce(flatten(x))
            if not in_span:
                raise InconsistencyError(
                    f"[{report.labels[a]},{report.labels[b]}] leaves the span ({len(residual)} residual terms)"
                )
            terms = tuple(sorted((c, v) for c, v in coords.items() if v))
            if terms:
                consts[(a, b)] = terms
                if a != b:
                    s = -_sign(ops[a].parity, ops[b].parity)
                    consts[(b, a)] = tuple((c, s * v) for c, v in terms)
    return ClosedSuperalgebra(
        tuple(report.labels),
        tuple(op.parity for op in ops),
        consts,
        report.n_susy,
        report.lambda_value,
        report.content,
    )


def super_jacobi(algebra: ClosedSuperalgebra) -> bool:
    """Graded antisymmetry on all pairs and graded Jacobi on all basis triples, exactly."""
    p = algebra.parities
    n = algebra.dim
    for a in range(n):
        for b in range(a, n):
            ab = dict(algebra.constants.get((a, b), ()))
            ba = dict(algebra.constants.get((b, a), ()))
            s = -_sign(p[a], p[b])
            if {c: s * v for c, v in ab.items()} != ba:
                logger.debug("antisymmetry fails on (%s,%s)", algebra.labels[a], algebra.labels[b])
                return False
    # with graded antisymmetry in place the cyclic Jacobi sum is symmetric, so one ordering per multiset
    for a, b, c in combinations_with_replacement(range(n), 3):
        ea, eb, ec = algebra.unit(a), algebra.unit(b), algebra.unit(c)
        lhs = algebra.bracket(ea, algebra.bracket(eb, ec))
        rhs = algebra.bracket(algebra.bracket(ea, eb), ec)
        _add_into(rhs, Fraction(_sign(p[a], p[b])), algebra.bracket(eb, algebra.bracket(ea, ec)))
        _add_into(lhs, Fraction(-1), rhs)
        if lhs:
            logger.debug("Jacobi fails on (%s,%s,%s)", algebra.labels[a], algebra.labels[b], algebra.labels[c])
            return False
    return True


def _ad_entries(algebra: ClosedSuperalgebra) -> List[Dict[Tuple[int, int], Fraction]]:
    """ad(e_x) as sparse {(row, col): f} with row c, col b meaning [e_x, e_b] ∋ f e_c."""
    ads: List[Dict[Tuple[int, int], Fraction]] = [dict() for _ in range(algebra.dim)]
    for (x, b), terms in algebra.constants.items():
        for c, f in terms:
            ads[x][(c, b)] = f
    return ads


def killing_form(algebra: ClosedSuperalgebra) -> List[List[Fraction]]:
    """B(x, y) = str(ad x ∘ ad y) on the basis."""
    ads = _ad_entries(algebra)
    n = algebra.dim
    out = [[Fraction(0)] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            acc = Fraction(0)
            ady = ads[y]
            for (c, b), fx in ads[x].items():
                fy = ady.get((b, c))
                if fy:
                    acc += -fx * fy if algebra.parities[c] == ODD else fx * fy
            out[x][y] = acc
    return out


def killing_rank(algebra: ClosedSuperalgebra) -> int:
    return rank(killing_form(algebra))


def change_basis(algebra: ClosedSuperalgebra, matrix: Sequence[Sequence[Fraction]]) -> ClosedSuperalgebra:
    """
    Rewrite the algebra in the basis ``e'_i = Σ_j matrix[i][j] e_j``.

    ``matrix`` must be invertible and may only mix basis elements of equal parity.
    """
    n = algebra.dim
    for i in range(n):
        for j in range(n):
            if matrix[i][j] and algebra.parities[i] != algebra.parities[j]:
                raise ValueError("change of basis mixes parities")
    inv = inverse(matrix)
    new_vecs = [{j: Fraction(v) for j, v in enumerate(row) if v} for row in matrix]
    consts: Dict[Tuple[int, int], Tuple[Tuple[int, Fraction], ...]] = {}
    for a in range(n):
        for b in range(n):
            old = algebra.bracket(new_vecs[a], new_vecs[b])
            coords: Element = {}
            for j, v in old.items():
                for k in range(n):
                    if inv[j][k]:
                        _add_into(coords, v * inv[j][k], {k: Fraction(1)})
            if coords:
                consts[(a, b)] = tuple(sorted(coords.items()))
    return ClosedSuperalgebra(
        algebra.labels, algebra.parities, consts, algebra.n_susy, algebra.lambda_value, algebra.content
    )


# --- catalogue ---------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogueEntry:
    name: str
    n_susy: int
    even_dim: int
    odd_dim: int
    r_symmetry: str
    exceptional: bool = False

    @property
    def r_dim(self) -> int:
        return self.even_dim - 3

    @property
    def signature(self) -> str:
        return f"{self.even_dim}|{self.odd_dim}"


D21_ALPHA = "D(2,1;α)"

_SUPERCONFORMAL = (
    CatalogueEntry("A_1", 0, 3, 0, "none"),
    CatalogueEntry("B(0,1)", 1, 3, 2, "none"),
    CatalogueEntry("A(1,0)", 2, 4, 4, "u(1)"),
    CatalogueEntry("C(2)", 2, 4, 4, "so(2)"),
    CatalogueEntry("B(1,1)", 3, 6, 6, "so(3)"),
    CatalogueEntry("A(1,1)", 4, 6, 8, "sl(2)"),
    CatalogueEntry(D21_ALPHA, 4, 9, 8, "sl(2)+sl(2)", exceptional=True),
    CatalogueEntry("B(2,1)", 5, 13, 10, "so(5)"),
    CatalogueEntry("A(2,1)", 6, 12, 12, "sl(3)+u(1)"),
    CatalogueEntry("B(1,2)", 6, 13, 12, "sp(4)"),
    CatalogueEntry("D(3,1)", 6, 18, 12, "so(6)"),
    CatalogueEntry("B(3,1)", 7, 24, 14, "so(7)"),
    CatalogueEntry("G(3)", 7, 17, 14, "G2", exceptional=True),
    CatalogueEntry("D(4,1)", 8, 31, 16, "so(8)"),
    CatalogueEntry("D(2,2)", 8, 16, 16, "sl(2)+sp(4)"),
    CatalogueEntry("A(3,1)", 8, 19, 16, "sl(4)+u(1)"),
    CatalogueEntry("F(4)", 8, 24, 16, "so(7)", exceptional=True),
)


@dataclass(frozen=True)
class AlgebraCatalogue:
    entries: Tuple[CatalogueEntry, ...] = field(default=_SUPERCONFORMAL)

    def __iter__(self) -> Iterator[CatalogueEntry]:
        return iter(self.entries)

    def get(self, name: str) -> Optional[CatalogueEntry]:
        return next((e for e in self.entries if e.name == name), None)

    def lookup(self, n_susy: int, even_dim: int, odd_dim: int) -> List[CatalogueEntry]:
        return [e for e in self.entries if (e.n_susy, e.even_dim, e.odd_dim) == (n_susy, even_dim, odd_dim)]


DEFAULT_CATALOGUE = AlgebraCatalogue()


def is_unidentified(name: str) -> bool:
    return name.startswith("unidentified")


def is_degenerate_d21(algebra: ClosedSuperalgebra) -> bool:
    """
    N=4 algebra whose 8 supercharges close on fewer than 9 even generators.

    At α = 0 or α = -1 one sl(2) of the R-symmetry decouples. Depending on how much
    of it survives saturation the even part is 6 or 7 dimensional (7|8 when a
    u(1) remains).
    """
    return algebra.n_susy == 4 and algebra.odd_dim == 8 and 6 <= algebra.even_dim < 9


def identify(algebra: ClosedSuperalgebra, catalogue: AlgebraCatalogue = DEFAULT_CATALOGUE) -> str:
    """Catalogue name for the (N, even|odd) signature, or ``unidentified[...]``."""
    sig = f"N={algebra.n_susy} {algebra.signature}"
    hits = catalogue.lookup(algebra.n_susy, algebra.even_dim, algebra.odd_dim)
    if is_degenerate_d21(algebra):
        # a decoupled R-symmetry ideal, not a genuine A(1,1)
        return f"unidentified[{sig}: degenerate {D21_ALPHA} limit]"
    if len(hits) == 1:
        return hits[0].name
    if hits:
        return f"unidentified[{sig}: " + " | ".join(h.name for h in hits) + "]"
    return f"unidentified[{sig}]"


# --- D(2,1;α) ------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaOrbit:
    values: FrozenSet[Fraction]
    degenerate: bool = False

    @staticmethod
    def images(alpha: Fraction) -> List[Fraction]:
        """The six S₃ images of α, skipping the ones with a vanishing denominator."""
        a = Fraction(alpha)
        out = [a, -1 - a]
        if a != 0:
            out += [1 / a, -(1 + a) / a]
        if a != -1:
            out += [-1 / (1 + a), -a / (1 + a)]
        return out

    @classmethod
    def of(cls, alpha: Fraction) -> "AlphaOrbit":
        a = Fraction(alpha)
        return cls(frozenset(cls.images(a)), degenerate=a in (0, -1))

    @classmethod
    def degenerate_orbit(cls) -> "AlphaOrbit":
        return cls.of(Fraction(0))

    def __contains__(self, item: object) -> bool:
        return item in self.values

    @property
    def canonical(self) -> Fraction:
        """Largest |α|, positive first on ties."""
        return max(self.values, key=lambda v: (abs(v), v > 0))

    def sorted_values(self) -> List[Fraction]:
        return sorted(self.values)

    def to_strings(self) -> List[str]:
        return [format_rational(v) for v in self.sorted_values()]


def r_symmetry_basis(algebra: ClosedSuperalgebra) -> List[Element]:
    """Centraliser of H and K inside the even part."""
    even = algebra.even_indices
    rows = []
    for x in (algebra.index("H"), algebra.index("K")):
        images = [algebra.bracket({x: Fraction(1)}, {e: Fraction(1)}) for e in even]
        for c in range(algebra.dim):
            rows.append([img.get(c, Fraction(0)) for img in images])
    return [{even[i]: v for i, v in enumerate(vec) if v} for vec in nullspace(rows, len(even))]


def _coords_in(basis: Sequence[Element], v: Element) -> List[Fraction]:
    eb = EchelonBasis()
    for b in basis:
        eb.insert(b)
    in_span, residual, coords = eb.reduce(v)
    if not in_span:
        raise InconsistencyError("element leaves the expected subalgebra")
    return [coords.get(i, Fraction(0)) for i in range(len(basis))]


def _split_simple_ideals(algebra: ClosedSuperalgebra, r_basis: List[Element]) -> List[List[Element]]:
    """Split R = sl2 ⊕ sl2 along the eigenspaces of a non-scalar element of its centroid."""
    n = len(r_basis)
    ad = []
    for ri in r_basis:
        cols = [_coords_in(r_basis, algebra.bracket(ri, rj)) for rj in r_basis]
        ad.append([[cols[j][k] for j in range(n)] for k in range(n)])

    rows = []
    for adi in ad:
        for k in range(n):
            for j in range(n):
                row = [Fraction(0)] * (n * n)
                for m in range(n):
                    row[k * n + m] += adi[m][j]
                    row[m * n + j] -= adi[k][m]
                rows.append(row)
    centroid = nullspace(rows, n * n)
    if len(centroid) != 2:
        raise InconsistencyError(f"R-symmetry centroid has dimension {len(centroid)}, expected 2")

    def as_matrix(v: Sequence[Fraction]) -> List[List[Fraction]]:
        return [list(v[k * n:(k + 1) * n]) for k in range(n)]

    mats = [as_matrix(v) for v in centroid]
    c = next(
        m for m in mats
        if any(m[i][j] for i in range(n) for j in range(n) if i != j) or len({m[i][i] for i in range(n)}) > 1
    )
    c2 = [[sum((c[i][k] * c[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    relation = nullspace(
        [[c2[i][j], c[i][j], ident[i][j]] for i in range(n) for j in range(n)], 3
    )
    if not relation:
        raise InconsistencyError("centroid element has no quadratic minimal polynomial")
    a2, a1, a0 = relation[0]
    eigen = sorted(poly_rational_roots(Poly((a0, a1, a2))))
    if len(eigen) != 2:
        raise InconsistencyError(f"centroid eigenvalues {eigen} are not two distinct rationals")
    ideals = []
    for ev in eigen:
        shifted = [[c[i][j] - (ev if i == j else 0) for j in range(n)] for i in range(n)]
        kernel = nullspace(shifted, n)
        ideal = []
        for vec in kernel:
            el: Element = {}
            for coeff, rb in zip(vec, r_basis):
                _add_into(el, coeff, rb)
            ideal.append(el)
        ideals.append(ideal)
    return ideals


def _ideal_killing(algebra: ClosedSuperalgebra, ideal: List[Element]) -> List[List[Fraction]]:
    n = len(ideal)
    ad = []
    for u in ideal:
        cols = [_coords_in(ideal, algebra.bracket(u, v)) for v in ideal]
        ad.append([[cols[j][k] for j in range(n)] for k in range(n)])
    return [
        [sum((ad[a][i][j] * ad[b][j][i] for i in range(n) for j in range(n)), Fraction(0)) for b in range(n)]
        for a in range(n)
    ]


def extract_alpha(algebra: ClosedSuperalgebra) -> AlphaOrbit:
    """
    S₃ orbit of α for a D(2,1;α)-type algebra.

    The even part splits into the conformal sl(2) and two R-symmetry ideals. For
    each ideal k, γ_k(x, y) = Σ_a κ_k(π_k{x, [z^a, y]}, z_a) with κ_k the ideal's
    own Killing form and z^a its dual basis; γ_k is proportional to the odd
    bracket coefficient s_k, and α = s_2 / s_1.
    """
    if is_degenerate_d21(algebra):
        logger.info("even part is %d-dimensional: degenerate alpha orbit", algebra.even_dim)
        return AlphaOrbit.degenerate_orbit()
    if (algebra.even_dim, algebra.odd_dim) != (9, 8):
        raise SignatureError("9|8", algebra.signature)

    conformal = [algebra.unit(algebra.index(lbl)) for lbl in ("H", "Dil", "K")]
    ideals = [conformal] + _split_simple_ideals(algebra, r_symmetry_basis(algebra))
    blocks = [len(i) for i in ideals]
    flat_basis = [v for ideal in ideals for v in ideal]

    def project(v: Element, k: int) -> List[Fraction]:
        coords = _coords_in(flat_basis, v)
        start = sum(blocks[:k])
        return coords[start:start + blocks[k]]

    kappas = [_ideal_killing(algebra, ideal) for ideal in ideals]
    duals = []
    for ideal, kappa in zip(ideals, kappas):
        try:
            inv = inverse(kappa)
        except ValueError as e:
            raise InconsistencyError("ideal Killing form is degenerate") from e
        dual = []
        for a in range(len(ideal)):
            el: Element = {}
            for b, u in enumerate(ideal):
                _add_into(el, inv[a][b], u)
            dual.append(el)
        duals.append(dual)

    def gamma(k: int, x: Element, y: Element) -> Fraction:
        total = Fraction(0)
        for a, za in enumerate(duals[k]):
            coords = project(algebra.bracket(x, algebra.bracket(za, y)), k)
            total += sum((coords[l] * kappas[k][l][a] for l in range(len(coords))), Fraction(0))
        return total

    odd = algebra.odd_indices
    for i, j in combinations_with_replacement(odd, 2):
        x, y = algebra.unit(i), algebra.unit(j)
        g = [gamma(k, x, y) for k in range(3)]
        if g[0] == 0:
            continue
        if sum(g) != 0:
            raise InconsistencyError(f"odd bracket coefficients {g} do not sum to zero")
        logger.debug("alpha from (%s,%s): s = %s", algebra.labels[i], algebra.labels[j], g)
        return AlphaOrbit.of(g[1] / g[0])
    raise InconsistencyError("no odd pair couples to the conformal ideal")
