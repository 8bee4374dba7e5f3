"""
Acceptance suite for dmodscan.

Checks are grouped by category:
- arithmetic: exact rationals, rational roots, interpolation
- multiplet: Clifford families, supersymmetry relations, dressing, basis independence
- closure: conformal relations, critical scalings, α identification, Jacobi, duality
- geometry: curvature, harmonicity, measure dimension, golden ratio, table
"""

from __future__ import annotations

__all__ = [
    "AcceptanceCheck",
    "CheckCategory",
    "CheckContext",
    "CheckMetadata",
    "CheckOutcome",
    "CheckRegistry",
    "get_global_registry",
]

from .arithmetic import ExactArithmeticCheck, InterpolationCheck, RationalRootsCheck
from .closure import (
    ConformalRelationsCheck,
    DualityCheck,
    JacobiCheck,
    N4AlphaCheck,
    N7CriticalityCheck,
    N8CriticalityCheck,
    NeverClosesCheck,
)
from .geometry import (
    CurvatureOracleCheck,
    GoldenRatioCheck,
    HarmonicScaleCheck,
    MeasureDimensionCheck,
    TableGoldenCheck,
)
from .multiplets import (
    BasisIndependenceCheck,
    CliffordRelationsCheck,
    DressingRoundTripCheck,
    SupersymmetryRelationsCheck,
)
from .registry import (
    AcceptanceCheck,
    CheckCategory,
    CheckContext,
    CheckMetadata,
    CheckOutcome,
    CheckRegistry,
    get_global_registry,
)


# Auto-register built-in checks on module import; fast ones first
def _register_builtin_checks() -> None:
    registry = get_global_registry()

    registry.register(ExactArithmeticCheck())
    registry.register(RationalRootsCheck())
    registry.register(InterpolationCheck())

    registry.register(CliffordRelationsCheck())
    registry.register(SupersymmetryRelationsCheck())
    registry.register(DressingRoundTripCheck())

    registry.register(ConformalRelationsCheck())
    registry.register(JacobiCheck())
    registry.register(N4AlphaCheck())

    registry.register(CurvatureOracleCheck())
    registry.register(HarmonicScaleCheck())
    registry.register(MeasureDimensionCheck())
    registry.register(GoldenRatioCheck())

    registry.register(N8CriticalityCheck())
    registry.register(NeverClosesCheck())
    registry.register(N7CriticalityCheck())
    registry.register(DualityCheck())
    registry.register(TableGoldenCheck())
    registry.register(BasisIndependenceCheck())


_register_builtin_checks()
