from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from dmodscan.diffop import EVEN, ODD, FieldSlot
from dmodscan.scf import build_generators, saturate
from dmodscan.ident import extract_constants
from dmodscan.susy import FieldContent, build_multiplet


def rationals(max_value: int = 50, max_denominator: int = 20) -> st.SearchStrategy[Fraction]:
    return st.fractions(min_value=-max_value, max_value=max_value, max_denominator=max_denominator)


def closed_algebra(counts, lam):
    report = saturate(build_generators(build_multiplet(FieldContent(tuple(counts))), Fraction(lam)))
    assert report.closed, report.diagnostic
    return extract_constants(report)


@pytest.fixture
def pair_slots():
    """One boson at offset 0 and one fermion at offset 1/2."""
    return (FieldSlot("x1", EVEN, Fraction(0)), FieldSlot("psi1", ODD, Fraction(1, 2)))


@pytest.fixture
def scalar_slot():
    return (FieldSlot("x", EVEN, Fraction(0)),)


@pytest.fixture(scope="session")
def osp12():
    """B(0,1) from the N=1 root at λ = 1/2."""
    return closed_algebra((1, 1, 0), Fraction(1, 2))


@pytest.fixture(scope="session")
def d21_alpha_one():
    """(0,4,4) at λ = 1: D(2,1;α) with α in the orbit of 2."""
    return closed_algebra((0, 4, 4), 1)
