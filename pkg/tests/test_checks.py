from __future__ import annotations

from fractions import Fraction

import pytest

from dmodscan.checks import (
    AcceptanceCheck,
    CheckCategory,
    CheckContext,
    CheckMetadata,
    CheckRegistry,
    get_global_registry,
)
from dmodscan.checks.multiplets import random_signed_permutation, same_closure
from dmodscan.errors import InconsistencyError
from dmodscan.scf import ClosureKind, ClosureResult
from dmodscan.susy import OCTONION_TRIPLES, FieldContent


class _Fixed(AcceptanceCheck):
    def __init__(self, name, passed=True, slow=False, error=None):
        self._meta = CheckMetadata(name, CheckCategory.ARITHMETIC, "fixed outcome", slow=slow)
        self._passed = passed
        self._error = error

    @property
    def metadata(self):
        return self._meta

    def run(self, ctx):
        if self._error is not None:
            raise self._error
        return self.outcome(self._passed, "fixed")


def test_registry_runs_in_order_and_catches_errors():
    reg = CheckRegistry()
    reg.register(_Fixed("ok"))
    reg.register(_Fixed("boom", error=InconsistencyError("broken table")))
    reg.register(_Fixed("slow", slow=True))
    outcomes = reg.run_all(CheckContext())
    assert [o.name for o in outcomes] == ["ok", "boom", "slow"]
    assert outcomes[1].passed is False
    assert outcomes[1].detail == "InconsistencyError: broken table"

    fast = reg.run_all(CheckContext(skip_slow=True))
    assert [o.name for o in fast] == ["ok", "boom"]
    assert [o.name for o in reg.run_all(CheckContext(), names=["slow"])] == ["slow"]
    assert reg.get("missing") is None


def test_global_registry_contents():
    reg = get_global_registry()
    names = [m.name for m in reg.list_checks()]
    assert len(names) == 19
    assert len(set(names)) == 19
    assert names[0] == "exact-arithmetic"
    slow = {m.name for m in reg.list_checks() if m.slow}
    assert slow == {"n8-criticality", "n8-never", "n7-criticality", "duality", "table-golden", "basis-independence"}
    assert [m.name for m in reg.list_checks(CheckCategory.GEOMETRY)][-1] == "table-golden"


@pytest.mark.parametrize("category", [CheckCategory.ARITHMETIC, CheckCategory.MULTIPLET, CheckCategory.GEOMETRY])
def test_fast_checks_pass(category):
    reg = get_global_registry()
    names = [m.name for m in reg.list_checks(category)]
    outcomes = reg.run_all(CheckContext(seed=0, skip_slow=True), names=names)
    assert outcomes
    assert all(o.passed for o in outcomes), [o for o in outcomes if not o.passed]


def test_closure_fast_checks_pass():
    outcomes = get_global_registry().run_all(CheckContext(), names=["conformal-relations", "super-jacobi"])
    assert [o.passed for o in outcomes] == [True, True]


def test_corrupted_octonion_table_fails_clifford_check():
    ctx = CheckContext(octonion_triples=OCTONION_TRIPLES[:-1])
    (outcome,) = get_global_registry().run_all(ctx, names=["clifford-relations"])
    assert not outcome.passed
    assert "m=7, n=8" in outcome.detail


def test_seed_determinism():
    a, b = CheckContext(seed=7), CheckContext(seed=7)
    assert random_signed_permutation(a.rng, 8) == random_signed_permutation(b.rng, 8)
    perm, signs = random_signed_permutation(CheckContext(seed=1).rng, 4)
    assert sorted(perm) == [0, 1, 2, 3]
    assert set(signs) <= {-1, 1}


@pytest.mark.slow
def test_n4_alpha_check():
    (outcome,) = get_global_registry().run_all(CheckContext(seed=3, degree_bound=2), names=["n4-alpha"])
    assert outcome.passed, outcome.detail


def test_registry_records_unexpected_exceptions():
    reg = CheckRegistry()
    reg.register(_Fixed("crash", error=ValueError("bad signature")))
    reg.register(_Fixed("after"))
    outcomes = reg.run_all(CheckContext())
    assert [(o.name, o.passed) for o in outcomes] == [("crash", False), ("after", True)]
    assert outcomes[0].detail == "ValueError: bad signature"


def test_same_closure_compares_kind_lambda_and_names():
    content = FieldContent((1, 8, 7))
    ref = ClosureResult(content, ClosureKind.CRITICAL, (Fraction(-1, 3),), names=("F(4)",))
    assert same_closure(ClosureResult(content, ClosureKind.CRITICAL, (Fraction(-1, 3),), names=("F(4)",)), ref)
    assert not same_closure(ClosureResult(content, ClosureKind.CRITICAL, (Fraction(1, 3),), names=("F(4)",)), ref)
    assert not same_closure(ClosureResult(content, ClosureKind.CRITICAL, (Fraction(-1, 3),), names=("G(3)",)), ref)
    assert not same_closure(ClosureResult(content, ClosureKind.NEVER), ref)


@pytest.mark.slow
def test_basis_independence_check():
    (outcome,) = get_global_registry().run_all(CheckContext(seed=5), names=["basis-independence"])
    assert outcome.passed, outcome.detail
    assert "7 contents" in outcome.detail
