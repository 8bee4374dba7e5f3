"""
Sigma-model checks: curvature against the finite-difference oracle, harmonic
factors and scale invariance, measure dimension, the golden ratio and the
table golden file.
"""

from __future__ import annotations

from fractions import Fraction

from ..exactnum import PolyLambda
from ..report.render import load_golden, render_table_text
from ..sigma import (
    ConformalTarget,
    build_table,
    curvature_oracle,
    golden_ratio_constraint,
    laplacian_coefficient,
    measure_dimension,
    scalar_curvature,
    scale_invariance_lambda,
)
from .arithmetic import small_rational
from .registry import AcceptanceCheck, CheckCategory, CheckContext, CheckMetadata, CheckOutcome

ORACLE_DIMENSIONS = tuple(range(1, 9))
ORACLE_RADII = (1.3, 2.0)
TOLERANCE = 1e-6
TABLE_GOLDEN = "table3.txt"


def curvature_error(D: int, r0: float) -> float:
    """Relative error of the closed form against the oracle (absolute where the closed form vanishes)."""
    coeff, power = scalar_curvature(D)
    exact = float(coeff) * r0 ** power
    numeric = curvature_oracle(D, r0)
    if coeff == 0:
        return abs(numeric)
    return abs(numeric - exact) / abs(exact)


class CurvatureOracleCheck(AcceptanceCheck):
    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("curvature-oracle", CheckCategory.GEOMETRY, "closed-form R matches finite differences")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        worst = 0.0
        for D in ORACLE_DIMENSIONS:
            for r0 in ORACLE_RADII:
                err = curvature_error(D, r0)
                if err >= TOLERANCE:
                    return self.outcome(False, f"D={D} r0={r0}: error {err:.3e}")
                worst = max(worst, err)
        return self.outcome(True, f"worst error {worst:.2e}")


class HarmonicScaleCheck(AcceptanceCheck):
    """Φ = r^(2−D) is harmonic and its scale-invariant λ is 1/(D−4)."""

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("harmonic-scale", CheckCategory.GEOMETRY, "harmonic factors and scale invariance")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for D in ORACLE_DIMENSIONS:
            b = Fraction(2 - D)
            if laplacian_coefficient(ConformalTarget(D, b)) != 0:
                return self.outcome(False, f"r^{b} is not harmonic in D={D}")
            if D != 4 and scale_invariance_lambda(b) != Fraction(1, D - 4):
                return self.outcome(False, f"D={D}: scale-invariant lambda {scale_invariance_lambda(b)}")
        return self.outcome(True)


class MeasureDimensionCheck(AcceptanceCheck):
    TRIALS = 100

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("measure-dimension", CheckCategory.GEOMETRY, "[DΨ] = 4-D and the dual sum vanishes")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for _ in range(self.TRIALS):
            D = int(ctx.rng.integers(0, 9))
            lam = small_rational(ctx.rng, 100)
            here = measure_dimension(D, lam)
            if here != 4 - D or here + measure_dimension(8 - D, -lam) != 0:
                return self.outcome(False, f"D={D} lambda={lam}: {here}")
        return self.outcome(True, f"{self.TRIALS} random cases")


class GoldenRatioCheck(AcceptanceCheck):
    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("golden-ratio", CheckCategory.GEOMETRY, "shared λ is a root of λ²+λ-1")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        res = golden_ratio_constraint()
        ok = res.lambda_min_poly == PolyLambda((-1, 1, 1)) and res.orbit_contains_phi
        return self.outcome(ok, f"minimal polynomial {res.lambda_min_poly}")


class TableGoldenCheck(AcceptanceCheck):
    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("table-golden", CheckCategory.GEOMETRY, "table matches the golden file byte for byte", slow=True)

    def run(self, ctx: CheckContext) -> CheckOutcome:
        got = render_table_text(build_table(ctx.degree_bound))
        want = load_golden(TABLE_GOLDEN)
        if got == want:
            return self.outcome(True)
        diff = next(
            (f"line {i + 1}: {a!r} != {b!r}" for i, (a, b) in enumerate(zip(got.splitlines(), want.splitlines())) if a != b),
            "length differs",
        )
        return self.outcome(False, diff)
