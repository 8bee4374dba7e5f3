"""
Exact-arithmetic checks: rational exactness, rational roots, interpolation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List

import numpy as np

from ..exactnum import PolyLambda, interpolate, poly_gcd, poly_rational_roots
from .registry import AcceptanceCheck, CheckCategory, CheckContext, CheckMetadata, CheckOutcome


def random_rational(rng: np.random.Generator, bits: int = 256) -> Fraction:
    """Signed rational with a ``bits``-bit numerator and a nonzero 64-bit denominator."""
    num = int.from_bytes(rng.bytes(bits // 8), "big")
    den = int.from_bytes(rng.bytes(8), "big") or 1
    return Fraction(-num if rng.integers(2) else num, den)


def small_rational(rng: np.random.Generator, span: int = 9) -> Fraction:
    return Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, span + 1)))


class ExactArithmeticCheck(AcceptanceCheck):
    TRIALS = 50

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("exact-arithmetic", CheckCategory.ARITHMETIC, "(a+b)-b == a on 256-bit rationals")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for _ in range(self.TRIALS):
            a, b = random_rational(ctx.rng), random_rational(ctx.rng)
            if (a + b) - b != a or (a * b) / b != a:
                return self.outcome(False, f"round trip failed for a={a}")
        return self.outcome(True, f"{self.TRIALS} trials")


class RationalRootsCheck(AcceptanceCheck):
    """Known examples plus products of random linear factors and an irreducible quadratic."""

    TRIALS = 20

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("rational-roots", CheckCategory.ARITHMETIC, "rational-root theorem is exact and complete")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        if poly_rational_roots(PolyLambda((-1, 3))) != {Fraction(1, 3)}:
            return self.outcome(False, "3λ-1 does not give {1/3}")
        if poly_rational_roots(PolyLambda((-1, 1, 1))):
            return self.outcome(False, "λ²+λ-1 reported a rational root")
        for _ in range(self.TRIALS):
            roots = {small_rational(ctx.rng) for _ in range(int(ctx.rng.integers(1, 5)))}
            p = PolyLambda((-1, 1, 1)) * int(ctx.rng.integers(1, 7))
            for r in roots:
                p = p * PolyLambda((-r, 1))
            found = poly_rational_roots(p)
            if found != roots:
                return self.outcome(False, f"{p}: expected {sorted(roots)}, got {sorted(found)}")
        return self.outcome(True, f"{self.TRIALS} trials")


class InterpolationCheck(AcceptanceCheck):
    TRIALS = 20

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("interpolation", CheckCategory.ARITHMETIC, "interpolate reproduces its samples and gcds are monic")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for _ in range(self.TRIALS):
            degree = int(ctx.rng.integers(0, 7))
            p = PolyLambda(tuple(small_rational(ctx.rng) for _ in range(degree + 1)))
            xs: List[Fraction] = sorted({small_rational(ctx.rng, 40) for _ in range(40)})[: degree + 3]
            if len(xs) < degree + 1:
                continue
            pts = [(x, p(x)) for x in xs]
            q = interpolate(pts, degree)
            if q != p or any(q(x) != y for x, y in pts):
                return self.outcome(False, f"interpolation of {p} gave {q}")
        g = poly_gcd(PolyLambda((-1, 3)), PolyLambda((-2, 6)))
        if g != PolyLambda((Fraction(-1, 3), 1)):
            return self.outcome(False, f"gcd(3λ-1, 6λ-2) = {g}")
        return self.outcome(True, f"{self.TRIALS} trials")
