"""
Sigma-model side: conformally flat targets g_ij = δ_ij r^b, their curvature,
the scale-invariance condition, and the table that ties them to the critical
scalings of the N=8 multiplets.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np

from .config import DEFAULT_DEGREE_BOUND
from .errors import ScaleConditionError, StepSizeError
from .exactnum import Poly, PolyLambda, Scalar, format_rational, parse_rational, poly_rational_roots
from .scf import ClosureKind, ClosureResult, find_critical
from .susy import FieldContent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConformalTarget:
    D: int
    b: Fraction


def laplacian_coefficient(target: ConformalTarget) -> Fraction:
    """Δ r^b = b(b+D−2) r^(b−2) in D dimensions; zero iff r^b is harmonic."""
    b = Fraction(target.b)
    return b * (b + target.D - 2)


def scale_invariance_lambda(b: Scalar) -> Fraction:
    """
    λ solving (b+2)λ + 1 = 0.

    Raises:
        ScaleConditionError: b = −2.
    """
    b = Fraction(b)
    if b == -2:
        raise ScaleConditionError()
    return Fraction(-1) / (b + 2)


def scalar_curvature(D: int) -> Tuple[Fraction, int]:
    """(¼(D−1)(D−2)²(D−6), D−4) for the harmonic factor Φ = r^(2−D)."""
    if D < 1:
        raise ValueError(f"target dimension must be >= 1, got {D}")
    return Fraction((D - 1) * (D - 2) ** 2 * (D - 6), 4), D - 4


# --- finite-difference oracle ---------------------------------------------------------

def _metric(x: np.ndarray, D: int) -> np.ndarray:
    r = np.linalg.norm(x)
    return r ** (2 - D) * np.eye(D)


def _metric_gradient(x: np.ndarray, D: int) -> np.ndarray:
    """∂_a g_jk = (2−D) r^(−D) x_a δ_jk, indexed [a, j, k]."""
    r = np.linalg.norm(x)
    return (2 - D) * r ** (-D) * np.einsum("a,jk->ajk", x, np.eye(D))


def _christoffel(x: np.ndarray, D: int) -> np.ndarray:
    """Γ^i_jk from the exact metric gradient."""
    ginv = np.linalg.inv(_metric(x, D))
    dg = _metric_gradient(x, D)
    # T[l, j, k] = ∂_j g_lk + ∂_k g_lj − ∂_l g_jk
    t = dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg
    return 0.5 * np.einsum("il,ljk->ijk", ginv, t)


def _ricci_scalar(x: np.ndarray, D: int, h: float) -> float:
    """R with ∂Γ taken by the five-point central stencil (error O(h⁴))."""
    gam = _christoffel(x, D)
    dgam = np.zeros((D, D, D, D))
    for a in range(D):
        step = np.zeros(D)
        step[a] = h
        dgam[a] = (
            _christoffel(x - 2 * step, D)
            - 8 * _christoffel(x - step, D)
            + 8 * _christoffel(x + step, D)
            - _christoffel(x + 2 * step, D)
        ) / (12 * h)
    ricci = (
        np.einsum("iilj->jl", dgam)
        - np.einsum("liij->jl", dgam)
        + np.einsum("iim,mlj->jl", gam, gam)
        - np.einsum("ilm,mij->jl", gam, gam)
    )
    ginv = np.linalg.inv(_metric(x, D))
    return float(np.einsum("jl,jl->", ginv, ricci))


def curvature_oracle(D: int, r0: float, h: Optional[float] = None) -> float:
    """
    Numerical scalar curvature of δ_ij r^(2−D) at a generic point with |x| = r0.

    Uses the sign convention of ``scalar_curvature`` (round spheres negative).
    Only the Christoffel symbols are differentiated numerically; the h and h/2
    estimates are combined by Richardson extrapolation.

    Raises:
        StepSizeError: the h and h/2 estimates disagree by more than 1e-4 (relative).
    """
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    h = 1e-3 * r0 if h is None else h
    direction = np.arange(1, D + 1, dtype=float)
    x = r0 * direction / np.linalg.norm(direction)
    coarse = -_ricci_scalar(x, D, h)
    fine = -_ricci_scalar(x, D, h / 2)
    gap = abs(coarse - fine)
    if gap > 1e-4 * max(1.0, abs(fine)):
        raise StepSizeError(gap)
    value = (16 * fine - coarse) / 15
    logger.debug("curvature oracle D=%d r0=%g h=%g: %r (gap %.2e)", D, r0, h, value, gap)
    return value


# --- table ----------------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    D: int
    phi: Optional[Fraction]
    curvature_coeff: Optional[Fraction]
    curvature_power: Optional[int]
    lambda_cr: Optional[Fraction]
    action_exists: bool
    algebra: Optional[str]

    @property
    def phi_text(self) -> str:
        if self.phi is None:
            return "-"
        if self.phi == 0:
            return "1"
        if self.phi == 1:
            return "r"
        return f"r^{format_rational(self.phi)}"

    @property
    def curvature_text(self) -> str:
        if self.curvature_coeff is None:
            return "-"
        c = format_rational(self.curvature_coeff)
        if self.curvature_coeff == 0 or self.curvature_power == 0:
            return c
        if self.curvature_power == 1:
            return f"{c} r"
        return f"{c} r^{self.curvature_power}"

    @property
    def lambda_text(self) -> str:
        return "-" if self.lambda_cr is None else format_rational(self.lambda_cr)

    def cells(self) -> List[str]:
        return [
            str(self.D),
            self.phi_text,
            self.curvature_text,
            self.lambda_text,
            "+" if self.action_exists else "-",
            self.algebra or "-",
        ]

    def to_record(self) -> dict:
        def opt(q: Optional[Fraction]) -> Optional[str]:
            return None if q is None else format_rational(q)

        return {
            "D": self.D,
            "phi_exponent": opt(self.phi),
            "curvature_coeff": opt(self.curvature_coeff),
            "curvature_power": self.curvature_power,
            "lambda_cr": opt(self.lambda_cr),
            "action_exists": self.action_exists,
            "algebra": self.algebra,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "TableRow":
        def opt(s: Optional[str]) -> Optional[Fraction]:
            return None if s is None else parse_rational(s)

        return cls(
            int(rec["D"]),
            opt(rec.get("phi_exponent")),
            opt(rec.get("curvature_coeff")),
            rec.get("curvature_power"),
            opt(rec.get("lambda_cr")),
            bool(rec["action_exists"]),
            rec.get("algebra"),
        )


TABLE_HEADER = ["D", "Φ", "R", "λ_cr", "𝒮", "𝒢"]


def build_row(D: int, result: ClosureResult) -> TableRow:
    critical = result.kind is ClosureKind.CRITICAL and len(result.critical) == 1
    lam = result.critical[0] if critical else None
    algebra = result.names[0] if critical else None
    if D == 0:
        return TableRow(0, None, None, None, lam, False, algebra)
    b = Fraction(2 - D)
    coeff, power = scalar_curvature(D)
    try:
        action = critical and scale_invariance_lambda(b) == lam
    except ScaleConditionError:
        action = False
    return TableRow(D, b, coeff, power, lam, action, algebra)


def build_table(
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    closure: Callable[..., ClosureResult] = find_critical,
) -> List[TableRow]:
    """Rows D = 0..8 for the (D, 8, 8−D) multiplets."""
    rows = []
    for D in range(9):
        result = closure(FieldContent((D, 8, 8 - D)), degree_bound)
        rows.append(build_row(D, result))
    return rows


def measure_dimension(D: int, lam: Scalar) -> Fraction:
    """Dλ − 8(λ+½) + (8−D)(λ+1); equals 4−D for every λ."""
    if not 0 <= D <= 8:
        raise ValueError(f"D must be in 0..8, got {D}")
    lam = Fraction(lam)
    return D * lam - 8 * (lam + Fraction(1, 2)) + (8 - D) * (lam + 1)


# --- golden ratio --------------------------------------------------------------------

class BranchVerdict(str, Enum):
    DEGENERATE = "degenerate"
    NO_REAL_ROOT = "no real root"
    INCONSISTENT = "inconsistent"
    SURVIVING = "surviving"


# name, (a, b, c, d) with f(α) = (aα + b)/(cα + d)
S3_MAPS: Tuple[Tuple[str, Tuple[int, int, int, int]], ...] = (
    ("a", (1, 0, 0, 1)),
    ("1/a", (0, 1, 1, 0)),
    ("-1-a", (-1, -1, 0, 1)),
    ("-1/(1+a)", (0, -1, 1, 1)),
    ("-a/(1+a)", (-1, 0, 1, 1)),
    ("-(1+a)/a", (-1, -1, 1, 0)),
)

PHI_MIN_POLY = Poly((-1, -1, 1))
DEGENERATE_ALPHA = (Fraction(0), Fraction(-1))


class OrbitBranch(NamedTuple):
    map_name: str
    condition: PolyLambda
    verdict: BranchVerdict


class GoldenRatioConstraint(NamedTuple):
    lambda_min_poly: PolyLambda
    orbit_contains_phi: bool
    branches: Tuple[OrbitBranch, ...]


def _classify(p: PolyLambda) -> BranchVerdict:
    if p.degree <= 0:
        return BranchVerdict.INCONSISTENT
    # degenerate: α₁ = λ or α₂ = −λ lands on 0 or −1
    q = p
    for r in sorted(poly_rational_roots(p)):
        if r in DEGENERATE_ALPHA or -r in DEGENERATE_ALPHA:
            while q.degree > 0 and q(r) == 0:
                q = q // PolyLambda((-r, 1))
    if q.degree <= 0:
        return BranchVerdict.DEGENERATE
    if q.degree == 2:
        c, b, a = q.coeffs
        if b * b - 4 * a * c < 0:
            return BranchVerdict.NO_REAL_ROOT
    return BranchVerdict.SURVIVING


def _mobius_image(m: Poly, a: int, b: int, c: int, d: int) -> Poly:
    """Polynomial whose roots are f(roots of m) for f(x) = (ax+b)/(cx+d)."""
    num = Poly((-b, d))
    den = Poly((a, -c))
    n = m.degree
    out = Poly()
    for k, coeff in enumerate(m.coeffs):
        term = Poly.constant(coeff)
        for _ in range(k):
            term = term * num
        for _ in range(n - k):
            term = term * den
        out = out + term
    return out


def _proportional(p: Poly, q: Poly) -> bool:
    return not p.is_zero() and p.monic() == q.monic()


def golden_ratio_constraint() -> GoldenRatioConstraint:
    """
    Shared λ with α₁ = λ (D=1) and α₂ = −λ (D=3) in one S₃ orbit.

    Each orbit map f gives −λ(cλ + d) = aλ + b. Two branches survive,
    λ²+λ−1 and λ²−λ−1, exchanged by λ ↦ −λ; the one with positive linear
    coefficient is returned, and the golden ratio φ (x²−x−1) is checked to
    lie in the orbit of its roots.
    """
    branches = []
    for name, (a, b, c, d) in S3_MAPS:
        cond = PolyLambda((b, a + d, c))
        branches.append(OrbitBranch(name, cond, _classify(cond)))
    survivors = [br.condition.monic() for br in branches if br.verdict is BranchVerdict.SURVIVING]
    chosen = max(survivors, key=lambda p: p.coeffs[1])
    as_poly = Poly(chosen.coeffs)
    contains_phi = any(_proportional(_mobius_image(as_poly, *abcd), PHI_MIN_POLY) for _, abcd in S3_MAPS)
    logger.debug("golden ratio branches: %s", [(br.map_name, str(br.condition), br.verdict.value) for br in branches])
    return GoldenRatioConstraint(chosen, contains_phi, tuple(branches))
