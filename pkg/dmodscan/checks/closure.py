"""
Closure checks: sl(2) and grading relations, the N=8 critical scalings, the
(4,8,4) and N=7 cases, the N=4 α identification, Jacobi and duality.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, List, Tuple

from ..errors import InconsistencyError
from ..ident import AlphaOrbit, ClosedSuperalgebra, extract_alpha, extract_constants, killing_form, super_jacobi
from ..scf import ClosureKind, ClosureResult, build_generators, duality_check, find_critical, saturate
from ..susy import FieldContent, build_multiplet
from .arithmetic import small_rational
from .registry import AcceptanceCheck, CheckCategory, CheckContext, CheckMetadata, CheckOutcome

logger = logging.getLogger(__name__)

N8_EXPECTED: Dict[int, str] = {
    0: "D(4,1)", 1: "F(4)", 2: "A(3,1)", 3: "D(2,2)",
    5: "D(2,2)", 6: "A(3,1)", 7: "F(4)", 8: "D(4,1)",
}
N8_SIGNATURES = {"D(4,1)": "31|16", "F(4)": "24|16", "A(3,1)": "19|16", "D(2,2)": "16|16"}
ALPHA_SAMPLES = (Fraction(1, 3), Fraction(2, 5), Fraction(3))


def expect_critical(result: ClosureResult, lam: Fraction, name: str) -> str:
    """Empty string when ``result`` is exactly Critical({lam}) named ``name``; a reason otherwise."""
    if result.kind is not ClosureKind.CRITICAL:
        return f"{result.content}: kind {result.kind.value}"
    if result.critical != (lam,):
        return f"{result.content}: critical {[str(x) for x in result.critical]}, expected {lam}"
    if result.names != (name,):
        return f"{result.content}: identified {result.names}, expected {name}"
    return ""


def algebra_at(content: FieldContent, lam: Fraction) -> ClosedSuperalgebra:
    report = saturate(build_generators(build_multiplet(content), lam))
    if not report.closed:
        raise InconsistencyError(f"{content} does not close at lambda={lam}: {report.diagnostic}")
    return extract_constants(report)


class ConformalRelationsCheck(AcceptanceCheck):
    """build_generators raises on any failed relation, so constructing is the check."""

    CASES: Tuple[Tuple[Tuple[int, ...], Fraction], ...] = (
        ((1, 1), Fraction(0)),
        ((0, 1, 1), Fraction(1, 2)),
        ((2, 2), Fraction(-3, 7)),
        ((1, 4, 3), Fraction(3)),
        ((0, 4, 4), Fraction(1)),
        ((1, 8, 7), Fraction(-1, 3)),
        ((1, 7, 7, 1), Fraction(-1, 4)),
    )

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("conformal-relations", CheckCategory.CLOSURE, "sl(2) and grading relations are exact")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for counts, lam in self.CASES:
            g = build_generators(build_multiplet(FieldContent(counts)), lam)
            logger.debug("%s at %s: %d generators", counts, lam, len(g.seed()))
        return self.outcome(True, f"{len(self.CASES)} generator sets")


class N8CriticalityCheck(AcceptanceCheck):
    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("n8-criticality", CheckCategory.CLOSURE, "λ_cr = 1/(D-4) for (D,8,8-D)", slow=True)

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for d, name in N8_EXPECTED.items():
            res = find_critical(FieldContent((d, 8, 8 - d)), ctx.degree_bound)
            reason = expect_critical(res, Fraction(1, d - 4), name)
            if reason:
                return self.outcome(False, reason)
            alg = res.witnesses[0]
            if alg.signature != N8_SIGNATURES[name]:
                return self.outcome(False, f"{res.content}: dims {alg.signature}")
            if not super_jacobi(alg):
                return self.outcome(False, f"{res.content}: Jacobi identity fails")
        return self.outcome(True, "D = 0..8 except 4")


class NeverClosesCheck(AcceptanceCheck):
    CONTENT = FieldContent((4, 8, 4))

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("n8-never", CheckCategory.CLOSURE, "(4,8,4) never closes", slow=True)

    def run(self, ctx: CheckContext) -> CheckOutcome:
        res = find_critical(self.CONTENT, ctx.degree_bound)
        return self.outcome(res.kind is ClosureKind.NEVER, f"kind {res.kind.value}")


class N7CriticalityCheck(AcceptanceCheck):
    CONTENT = FieldContent((1, 7, 7, 1))

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("n7-criticality", CheckCategory.CLOSURE, "(1,7,7,1) closes at -1/4 as G(3)", slow=True)

    def run(self, ctx: CheckContext) -> CheckOutcome:
        res = find_critical(self.CONTENT, ctx.degree_bound)
        reason = expect_critical(res, Fraction(-1, 4), "G(3)")
        if reason:
            return self.outcome(False, reason)
        alg = res.witnesses[0]
        if alg.signature != "17|14" or not super_jacobi(alg):
            return self.outcome(False, f"witness {alg.signature} fails the axioms")
        return self.outcome(True)


class N4AlphaCheck(AcceptanceCheck):
    """
    Every (D,4,4−D) closes for all λ; α = (2−D)λ lies in the extracted orbit,
    and D=2 gives the degenerate orbit. Five extra random λ must close too.
    """

    EXTRA = 5

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("n4-alpha", CheckCategory.CLOSURE, "N=4 closes for any λ with α = (2-D)λ")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for d in range(5):
            content = FieldContent((d, 4, 4 - d))
            res = find_critical(content, ctx.degree_bound)
            if res.kind is not ClosureKind.ANY:
                return self.outcome(False, f"{content}: kind {res.kind.value}")
            sampled = set(ALPHA_SAMPLES)
            extra: List[Fraction] = []
            while len(extra) < self.EXTRA:
                lam = small_rational(ctx.rng, 50)
                if lam not in sampled and lam.denominator != 13 and lam not in (0, Fraction(-1, 2), -1):
                    sampled.add(lam)
                    extra.append(lam)
            for lam in ALPHA_SAMPLES + tuple(extra):
                orbit = extract_alpha(algebra_at(content, lam))
                reason = self._orbit_problem(d, lam, orbit)
                if reason:
                    return self.outcome(False, f"{content} at lambda={lam}: {reason}")
        return self.outcome(True, f"D = 0..4, {len(ALPHA_SAMPLES) + self.EXTRA} λ each")

    @staticmethod
    def _orbit_problem(d: int, lam: Fraction, orbit: AlphaOrbit) -> str:
        alpha = (2 - d) * lam
        if alpha in (0, -1):
            return "" if orbit.degenerate else "degenerate case not flagged"
        if orbit.degenerate:
            return "unexpected degenerate orbit"
        return "" if alpha in orbit else f"alpha {alpha} not in orbit {orbit.to_strings()}"


class JacobiCheck(AcceptanceCheck):
    """Graded Jacobi on low-N witnesses, a hand-corrupted constant, and Killing form sanity."""

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("super-jacobi", CheckCategory.CLOSURE, "closed algebras satisfy graded Jacobi")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        algebras = [
            algebra_at(FieldContent((1, 1)), Fraction(1, 2)),
            algebra_at(FieldContent((1, 2, 1)), Fraction(1, 3)),
            algebra_at(FieldContent((0, 4, 4)), Fraction(1)),
        ]
        for alg in algebras:
            if not super_jacobi(alg):
                return self.outcome(False, f"{alg.content}: Jacobi identity fails")
            B = killing_form(alg)
            h, k = alg.index("H"), alg.index("K")
            if B[h][h] != 0 or B[h][k] == 0:
                return self.outcome(False, f"{alg.content}: Killing form B(H,H)={B[h][h]}, B(H,K)={B[h][k]}")
        alg = algebras[-1]
        q1, s1 = alg.index("Q1"), alg.index("S1")
        corrupted = alg.with_constant(q1, s1, alg.index("Dil"), Fraction(7))
        if super_jacobi(corrupted):
            return self.outcome(False, "corrupted structure constant passes Jacobi")
        return self.outcome(True, f"{len(algebras)} algebras")


class DualityCheck(AcceptanceCheck):
    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("duality", CheckCategory.CLOSURE, "λ_D = -λ_{8-D} with matching algebras", slow=True)

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for d in (0, 1, 2, 3):
            dual, ok = duality_check(d, ctx.degree_bound)
            if not ok:
                return self.outcome(False, f"D={d} and D={dual} disagree")
        return self.outcome(True, "D = 0..3 against 8..5")
