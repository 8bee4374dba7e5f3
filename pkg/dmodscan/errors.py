"""Exception hierarchy for dmodscan."""
from __future__ import annotations

from typing import Optional, Tuple


class DmodError(Exception):
    """Base class for every error raised by dmodscan."""


class ZeroPolynomialError(DmodError):
    def __init__(self, message: str = "identically zero residual"):
        super().__init__(message)


class DegreeBoundExceeded(DmodError):
    def __init__(self, bound: int):
        self.bound = bound
        super().__init__(f"degree bound exceeded (bound={bound})")


class DegreeBoundExhausted(DmodError):
    def __init__(self, bound: int):
        self.bound = bound
        super().__init__(f"degree bound exhausted (last bound={bound})")


class PowerCapExceeded(DmodError):
    """A composition produced a ∂-power above the configured cap."""

    def __init__(self, power: int, cap: int):
        self.power = power
        self.cap = cap
        super().__init__(f"d-power {power} exceeds cap {cap}")


class NonlocalOperatorError(DmodError):
    def __init__(self, position: Tuple[int, int], power: int):
        self.position = position
        self.power = power
        super().__init__(f"nonlocal operator: entry {position} carries d^{power}")


class ParityError(DmodError):
    pass


class CliffordError(DmodError):
    def __init__(self, m: int, n: int, detail: Optional[str] = None):
        self.m = m
        self.n = n
        msg = f"no minimal real Clifford family for (m={m}, n={n})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ConstructionError(DmodError):
    """A generator set failed one of its defining relations."""

    def __init__(self, relation: str, detail: str = ""):
        self.relation = relation
        super().__init__(f"relation {relation} violated" + (f" ({detail})" if detail else ""))


class ContentError(DmodError):
    pass


class InconsistencyError(DmodError):
    pass


class ScaleConditionError(DmodError):
    def __init__(self, message: str = "scale condition degenerate"):
        super().__init__(message)


class StepSizeError(DmodError):
    def __init__(self, disagreement: float):
        self.disagreement = disagreement
        super().__init__(f"finite-difference step too large (h vs h/2 disagree by {disagreement:.3e})")


class SignatureError(DmodError):
    """An algebra has the wrong (even|odd) signature for the requested analysis."""

    def __init__(self, needed: str, got: str):
        self.needed = needed
        self.got = got
        super().__init__(f"needs a {needed} algebra, got {got}")
