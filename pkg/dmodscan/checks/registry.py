"""
Check registry and base classes for the acceptance suite behind ``dmodscan verify``.

Each check is a small class with metadata and a ``run`` method returning a
``CheckOutcome``. Built-in checks register themselves with the global
registry when ``dmodscan.checks`` is imported.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_DEGREE_BOUND, DEFAULT_SEED
from ..errors import DmodError

logger = logging.getLogger(__name__)


class CheckCategory(str, Enum):
    """Areas covered by the acceptance suite."""
    ARITHMETIC = "arithmetic"
    MULTIPLET = "multiplet"
    CLOSURE = "closure"
    GEOMETRY = "geometry"


@dataclass
class CheckMetadata:
    name: str
    category: CheckCategory
    description: str
    slow: bool = False


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CheckContext:
    """
    Knobs shared by every check.

    ``octonion_triples`` replaces the built-in multiplication table; it exists
    so a corrupted table can be injected and the Clifford checks seen to fail.
    """
    seed: int = DEFAULT_SEED
    degree_bound: int = DEFAULT_DEGREE_BOUND
    skip_slow: bool = False
    octonion_triples: Optional[Sequence[Tuple[int, int, int]]] = None
    rng: np.random.Generator = field(init=False)

    def __post_init__(self) -> None:
        self.rng = np.random.default_rng(self.seed)


class AcceptanceCheck(ABC):
    @property
    @abstractmethod
    def metadata(self) -> CheckMetadata:
        """Return metadata about this check."""

    @abstractmethod
    def run(self, ctx: CheckContext) -> CheckOutcome:
        """
        Execute the check.

        Args:
            ctx: shared seed, degree bound and test hooks

        Returns:
            The outcome; ``passed`` False names what went wrong in ``detail``.
        """

    def outcome(self, passed: bool, detail: str = "") -> CheckOutcome:
        return CheckOutcome(self.metadata.name, passed, detail)


class CheckRegistry:
    """Ordered collection of acceptance checks."""

    def __init__(self) -> None:
        self._checks: Dict[str, AcceptanceCheck] = {}

    def register(self, check: AcceptanceCheck) -> None:
        self._checks[check.metadata.name] = check

    def get(self, name: str) -> Optional[AcceptanceCheck]:
        return self._checks.get(name)

    def list_checks(self, category: Optional[CheckCategory] = None) -> List[CheckMetadata]:
        return [c.metadata for c in self._checks.values() if category is None or c.metadata.category == category]

    def run_all(self, ctx: CheckContext, names: Optional[Sequence[str]] = None) -> List[CheckOutcome]:
        """
        Run the selected checks in registration order.

        A check that raises counts as failed with the exception as detail; slow
        checks are skipped when ``ctx.skip_slow`` is set.
        """
        out: List[CheckOutcome] = []
        for name, check in self._checks.items():
            if names is not None and name not in names:
                continue
            if ctx.skip_slow and check.metadata.slow:
                logger.info("skipping slow check %s", name)
                continue
            logger.info("running check %s", name)
            try:
                res = check.run(ctx)
            except DmodError as e:
                res = CheckOutcome(name, False, f"{type(e).__name__}: {e}")
            except Exception as e:
                logger.exception("check %s crashed", name)
                res = CheckOutcome(name, False, f"{type(e).__name__}: {e}")
            out.append(res)
        return out


_global_registry = CheckRegistry()


def get_global_registry() -> CheckRegistry:
    """Get the global check registry instance."""
    return _global_registry
