"""
Superconformal closure.

``build_generators`` adds the sl(2) triple and S_i = [K, Q_i] to a global
multiplet at a fixed λ. ``saturate`` brackets everything until the span stops
growing (or a cap trips). ``find_critical`` samples λ, reconstructs the closure
residual as exact polynomials in λ and keeps the rational roots that pass
a full saturation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .config import DEFAULT_DEGREE_BOUND, DEFAULT_DIM_CAP, DEFAULT_POWER_CAP, DEFAULT_T_DEGREE_CAP
from .diffop import (
    EVEN,
    ODD,
    DiffEntry,
    EchelonBasis,
    GradedOperator,
    Vector,
    diagonal,
    flatten,
    graded_bracket,
    identity,
)
from .errors import (
    ConstructionError,
    DegreeBoundExceeded,
    DegreeBoundExhausted,
    PowerCapExceeded,
)
from .exactnum import PolyLambda, PolyT, format_rational, interpolate, poly_gcd, poly_rational_roots
from .ident import ClosedSuperalgebra, extract_constants, identify
from .susy import CliffordFamily, FieldContent, GlobalMultiplet, build_multiplet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConformalGenerators:
    multiplet: GlobalMultiplet
    lambda_value: Fraction
    H: GradedOperator
    Dil: GradedOperator
    K: GradedOperator
    Q: Tuple[GradedOperator, ...]
    S: Tuple[GradedOperator, ...]

    @property
    def n_susy(self) -> int:
        return len(self.Q)

    @property
    def labels(self) -> List[str]:
        n = self.n_susy
        return ["H", "Dil", "K"] + [f"Q{i + 1}" for i in range(n)] + [f"S{i + 1}" for i in range(n)]

    def seed(self) -> List[GradedOperator]:
        return [self.H, self.Dil, self.K, *self.Q, *self.S]


def _expect(relation: str, got: GradedOperator, want: GradedOperator) -> None:
    if flatten(got) != flatten(want):
        raise ConstructionError(relation)


def build_generators(
    m: GlobalMultiplet,
    lam: Fraction,
    power_cap: int = DEFAULT_POWER_CAP,
) -> ConformalGenerators:
    """
    H = ∂𝟙, Dil = −t∂𝟙 − Λ, K = −t²∂𝟙 − 2tΛ with Λ = diag(λ + offset), and S_i = [K, Q_i].

    Raises:
        ConstructionError: one of the sl(2) or grading relations fails.
    """
    lam = Fraction(lam)
    slots = m.slots
    mus = [lam + s.dim_offset for s in slots]
    H = identity(slots, 1).with_lambda(lam)
    Dil = diagonal(
        slots,
        [DiffEntry({1: PolyT((0, -1)), 0: PolyT.constant(-mu)}) for mu in mus],
        lam,
    )
    K = diagonal(
        slots,
        [DiffEntry({1: PolyT((0, 0, -1)), 0: PolyT((0, -2 * mu))}) for mu in mus],
        lam,
    )
    Q = tuple(q.with_lambda(lam) for q in m.supercharges)
    S = tuple(graded_bracket(K, q, power_cap) for q in Q)

    def br(a: GradedOperator, b: GradedOperator) -> GradedOperator:
        return graded_bracket(a, b, power_cap)

    _expect("[Dil,H]=H", br(Dil, H), H)
    _expect("[Dil,K]=-K", br(Dil, K), K.scale(-1))
    _expect("[H,K]=2Dil", br(H, K), Dil.scale(2))
    half = Fraction(1, 2)
    for i, (q, s) in enumerate(zip(Q, S), start=1):
        _expect(f"[Dil,Q{i}]=Q{i}/2", br(Dil, q), q.scale(half))
        _expect(f"[Dil,S{i}]=-S{i}/2", br(Dil, s), s.scale(-half))
    return ConformalGenerators(m, lam, H, Dil, K, Q, S)


def closure_residual(g: ConformalGenerators, power_cap: int = DEFAULT_POWER_CAP) -> Dict[Tuple[int, int, int], Vector]:
    """
    Residuals of [{Q_i, S_j}, Q_k] against span{Q}, for i ≤ j and every k.

    The brackets sit at weight 1/2, so in a closed algebra they must lie in
    span{Q}; that span is λ-independent, so every residual coordinate is a
    polynomial in λ. Empty result means every residual vanishes.
    """
    eb = EchelonBasis()
    for q in g.Q:
        eb.insert(flatten(q))
    out: Dict[Tuple[int, int, int], Vector] = {}
    n = g.n_susy
    for i in range(n):
        for j in range(i, n):
            e = graded_bracket(g.Q[i], g.S[j], power_cap)
            for k in range(n):
                x = graded_bracket(e, g.Q[k], power_cap)
                in_span, residual, _ = eb.reduce(flatten(x))
                if not in_span:
                    out[(i, j, k)] = residual
    return out


@dataclass(frozen=True)
class SaturationReport:
    closed: bool
    basis: Tuple[GradedOperator, ...]
    labels: Tuple[str, ...]
    n_susy: int
    lambda_value: Optional[Fraction] = None
    content: Optional[str] = None
    residuals: Tuple[Dict, ...] = ()
    diagnostic: str = ""

    @property
    def even_dim(self) -> int:
        return sum(1 for op in self.basis if op.parity == EVEN)

    @property
    def odd_dim(self) -> int:
        return sum(1 for op in self.basis if op.parity == ODD)

    @property
    def dims(self) -> str:
        return f"{self.even_dim}|{self.odd_dim}"


def saturate(
    g: ConformalGenerators,
    power_cap: int = DEFAULT_POWER_CAP,
    t_degree_cap: int = DEFAULT_T_DEGREE_CAP,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> SaturationReport:
    """
    Bracket all pairs of the growing basis until nothing new appears.

    New even elements are appended as R1, R2, ...; an odd bracket outside
    span{Q, S} or any tripped cap ends the run with ``closed=False``.
    """
    basis = g.seed()
    labels = g.labels
    eb = EchelonBasis()
    for op, lbl in zip(basis, labels):
        if not eb.insert(flatten(op)):
            raise ConstructionError("seed independence", f"{lbl} is dependent on earlier generators")

    def report(closed: bool, residual: Optional[Dict] = None, diagnostic: str = "") -> SaturationReport:
        if not closed:
            logger.debug("saturation at lambda=%s open: %s", format_rational(g.lambda_value), diagnostic)
        return SaturationReport(
            closed,
            tuple(basis),
            tuple(labels),
            g.n_susy,
            g.lambda_value,
            g.multiplet.content.label,
            (residual,) if residual else (),
            diagnostic,
        )

    k = 0
    while k < len(basis):
        for i in range(k + 1):
            a, b = basis[i], basis[k]
            if i == k and a.parity == EVEN:
                continue
            try:
                x = graded_bracket(a, b, power_cap)
            except PowerCapExceeded as e:
                return report(False, diagnostic=f"[{labels[i]},{labels[k]}]: {e}")
            if x.t_degree > t_degree_cap:
                return report(False, diagnostic=f"[{labels[i]},{labels[k]}]: t-degree {x.t_degree} > {t_degree_cap}")
            vec = flatten(x)
            in_span, residual, _ = eb.reduce(vec)
            if in_span:
                continue
            if x.parity == ODD:
                return report(False, residual, f"[{labels[i]},{labels[k]}] leaves span{{Q,S}}")
            eb.insert(vec)
            basis.append(x)
            labels.append(f"R{len(basis) - 2 * g.n_susy - 3}")
            logger.debug("appended %s = [%s,%s]", labels[-1], labels[i], labels[k])
            if len(basis) > dim_cap:
                return report(False, diagnostic=f"dimension exceeds cap {dim_cap}")
        k += 1
    return report(True)


# --- criticality ------------------------------------------------------------------

class ClosureKind(str, Enum):
    ANY = "AnyLambda"
    CRITICAL = "Critical"
    NEVER = "Never"


@dataclass(frozen=True)
class ClosureResult:
    content: FieldContent
    kind: ClosureKind
    critical: Tuple[Fraction, ...] = ()
    witnesses: Tuple[ClosedSuperalgebra, ...] = ()
    names: Tuple[str, ...] = ()
    residual_gcd: Optional[PolyLambda] = None
    degree_bound: int = DEFAULT_DEGREE_BOUND

    def to_record(self) -> dict:
        rec = {
            "content": self.content.label,
            "kind": self.kind.value,
            "critical_lambdas": [format_rational(x) for x in sorted(self.critical)],
            "algebras": list(self.names),
            "dims": [w.signature for w in self.witnesses],
        }
        if self.kind is ClosureKind.ANY:
            rec["witness_lambda"] = format_rational(self.witnesses[0].lambda_value) if self.witnesses else None
        return rec


def sample_lambdas(count: int, offsets: Sequence[Fraction]) -> List[Fraction]:
    """
    ``count`` distinct λ of the form (2k+1)/13, nearest zero first, avoiding
    any λ that makes some slot dimension λ + offset vanish. Sorted ascending.
    """
    out: List[Fraction] = []
    step = 0
    while len(out) < count:
        for k in (step, -step - 1):
            lam = Fraction(2 * k + 1, 13)
            if all(lam + off != 0 for off in offsets) and len(out) < count:
                out.append(lam)
        step += 1
    return sorted(out)


@dataclass
class _SampleRun:
    lam: Fraction
    residuals: Dict[Tuple[int, int, int], Vector]
    report: Optional[SaturationReport] = None

    @property
    def closed(self) -> bool:
        return self.report is not None and self.report.closed


def _run_sample(m: GlobalMultiplet, lam: Fraction) -> _SampleRun:
    g = build_generators(m, lam)
    residuals = closure_residual(g)
    run = _SampleRun(lam, residuals)
    if not residuals:
        run.report = saturate(g)
        if not run.report.closed:
            logger.warning(
                "closure residual vanishes at lambda=%s but saturation stays open (%s)",
                format_rational(lam), run.report.diagnostic,
            )
    return run


def _residual_gcd(runs: List[_SampleRun], degree_bound: int) -> PolyLambda:
    keys = sorted({(triple, key) for r in runs for triple, vec in r.residuals.items() for key in vec})
    g: Optional[PolyLambda] = None
    for triple, key in keys:
        pts = [(r.lam, r.residuals.get(triple, {}).get(key, Fraction(0))) for r in runs]
        p = interpolate(pts, degree_bound)
        if p.is_zero():
            continue
        g = p.monic() if g is None else poly_gcd(g, p)
        if g.degree == 0:
            break
    return g if g is not None else PolyLambda()


def _witness(m: GlobalMultiplet, report: SaturationReport) -> Tuple[ClosedSuperalgebra, str]:
    alg = extract_constants(report)
    name = identify(alg)
    logger.info("%s at lambda=%s closes as %s (%s)", m.content, format_rational(report.lambda_value), name, alg.signature)
    return alg, name


def _analyse(m: GlobalMultiplet, degree_bound: int) -> ClosureResult:
    offsets = sorted({s.dim_offset for s in m.slots})
    runs = [_run_sample(m, lam) for lam in sample_lambdas(2 * degree_bound + 2, offsets)]
    logger.debug("%s: %d/%d samples close", m.content, sum(r.closed for r in runs), len(runs))

    if all(r.closed for r in runs):
        alg, name = _witness(m, runs[0].report)
        return ClosureResult(m.content, ClosureKind.ANY, (), (alg,), (name,), None, degree_bound)

    gcd = _residual_gcd(runs, degree_bound)
    if gcd.is_zero():
        logger.warning("%s: closure residuals vanish identically but saturation fails", m.content)
        return ClosureResult(m.content, ClosureKind.NEVER, residual_gcd=gcd, degree_bound=degree_bound)

    roots = sorted(poly_rational_roots(gcd)) if gcd.degree > 0 else []
    critical, witnesses, names = [], [], []
    for lam in roots:
        rep = saturate(build_generators(m, lam))
        if not rep.closed:
            logger.debug("%s: root lambda=%s fails saturation", m.content, format_rational(lam))
            continue
        alg, name = _witness(m, rep)
        critical.append(lam)
        witnesses.append(alg)
        names.append(name)
    kind = ClosureKind.CRITICAL if critical else ClosureKind.NEVER
    return ClosureResult(m.content, kind, tuple(critical), tuple(witnesses), tuple(names), gcd, degree_bound)


@lru_cache(maxsize=None)
def _find_critical_cached(content: FieldContent, degree_bound: int, family: Optional[CliffordFamily]) -> ClosureResult:
    m = build_multiplet(content, family)
    try:
        return _analyse(m, degree_bound)
    except DegreeBoundExceeded:
        logger.info("%s: degree bound %d exceeded, retrying with %d", content, degree_bound, 2 * degree_bound)
    try:
        return _analyse(m, 2 * degree_bound)
    except DegreeBoundExceeded as e:
        raise DegreeBoundExhausted(e.bound) from e


def find_critical(
    content: FieldContent,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    family: Optional[CliffordFamily] = None,
) -> ClosureResult:
    """
    Classify ``content`` as closing for every λ, at finitely many critical λ, or never.

    Raises:
        DegreeBoundExhausted: the residual needs more than twice ``degree_bound``.
    """
    return _find_critical_cached(content, degree_bound, family)


def duality_check(d: int, degree_bound: int = DEFAULT_DEGREE_BOUND) -> Tuple[int, bool]:
    """(8−D, ok) where ok means λ_D = −λ_{8−D} and both sides close to the same algebra."""
    if d == 4 or not 0 <= d <= 8:
        raise ValueError(f"duality is defined for D in 0..8 except 4, got {d}")
    dual = 8 - d
    left = find_critical(FieldContent((d, 8, 8 - d)), degree_bound)
    right = find_critical(FieldContent((dual, 8, 8 - dual)), degree_bound)
    ok = (
        left.kind is ClosureKind.CRITICAL
        and right.kind is ClosureKind.CRITICAL
        and len(left.critical) == 1
        and len(right.critical) == 1
        and left.critical[0] == -right.critical[0]
        and left.names == right.names
    )
    return dual, ok
