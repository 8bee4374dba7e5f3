from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest

from dmodscan.diffop import EVEN, ODD
from dmodscan.errors import CliffordError, ConstructionError, ContentError
from dmodscan.susy import (
    OCTONION_TRIPLES,
    SUPPORTED_FAMILIES,
    FieldContent,
    build_global,
    build_multiplet,
    build_n7,
    build_root,
    clifford_generators,
    dress,
)


@pytest.mark.parametrize("m, n", SUPPORTED_FAMILIES)
def test_clifford_families_are_valid(m, n):
    family = clifford_generators(m, n)
    assert family.m == m
    assert family.n == n
    assert family.violations() == []


def test_unsupported_family():
    with pytest.raises(CliffordError):
        clifford_generators(2, 3)
    with pytest.raises(CliffordError):
        build_root(3)


def test_incomplete_octonion_table_is_rejected():
    with pytest.raises(CliffordError, match="no entry"):
        clifford_generators(7, 8, OCTONION_TRIPLES[:-1])


def test_broken_family_reports_violations():
    family = clifford_generators(1, 2)
    doubled = replace(family, gammas=tuple(tuple(tuple(2 * v for v in row) for row in g) for g in family.gammas))
    assert doubled.violations() == ["gamma_1^2 != -1"]


def test_conjugated_family_stays_valid():
    family = clifford_generators(7, 8)
    conj = family.conjugated([3, 1, 0, 2, 7, 6, 5, 4], [1, -1, 1, 1, -1, -1, 1, 1])
    assert conj.violations() == []
    with pytest.raises(ValueError):
        family.conjugated([0, 0, 1, 2, 3, 4, 5, 6], [1] * 8)


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_root_multiplet_relations(n):
    root = build_root(n)
    assert root.content.counts == (n, n)
    assert root.n_susy == n
    assert root.relation_failures() == []
    assert all(q.parity == ODD for q in root.supercharges)


def test_root_from_conjugated_family():
    family = clifford_generators(3, 4).conjugated([2, 0, 3, 1], [-1, 1, 1, -1])
    assert build_root(4, family).relation_failures() == []


def test_verify_catches_rescaled_supercharge():
    root = build_root(2)
    bad = replace(root, supercharges=(root.supercharges[0].scale(2),) + root.supercharges[1:])
    with pytest.raises(ConstructionError):
        bad.verify()


def test_dress_examples():
    m = build_global(FieldContent.parse("1,8"))
    assert m.content.counts == (1, 8, 7)
    assert m.n_susy == 8
    assert m.discarded == ()

    single = build_global(FieldContent.parse("0,1"))
    assert single.content.counts == (0, 1, 1)
    assert [s.parity for s in single.slots] == [EVEN, ODD]
    assert [s.dim_offset for s in single.slots] == [1, Fraction(1, 2)]


def test_dress_all_bosons_round_trip():
    m = dress(build_root(4), range(1, 5))
    assert m.content.trimmed == (0, 4, 4)
    assert m.discarded == ()
    assert m.relation_failures() == []


@pytest.mark.parametrize("counts", [(8, 8, 0), (0, 4, 4), (2, 4, 2), (1, 2, 1)])
def test_build_global(counts):
    m = build_global(FieldContent(counts))
    assert m.content.counts == counts
    assert m.relation_failures() == []


def test_build_global_rejects_other_shapes():
    with pytest.raises(ContentError):
        build_global(FieldContent((3, 3, 0)))
    with pytest.raises(ContentError):
        build_global(FieldContent((1, 7, 7, 1)))


def test_n7_multiplet():
    m = build_n7()
    assert m.content.counts == (1, 7, 7, 1)
    assert m.n_susy == 7
    assert m.discarded == (8,)
    offsets = sorted(s.dim_offset for s in m.slots)
    assert offsets == [0] + [Fraction(1, 2)] * 7 + [1] * 7 + [Fraction(3, 2)]
    assert build_multiplet(FieldContent((1, 7, 7, 1))).charge_index == m.charge_index


@pytest.mark.parametrize(
    "text, counts",
    [("1,8", (1, 8, 7)), ("(1,7,7,1)", (1, 7, 7, 1)), (" (2, 4, 2) ", (2, 4, 2)), ("4,4", (4, 4, 0))],
)
def test_parse_content(text, counts):
    assert FieldContent.parse(text).counts == counts


@pytest.mark.parametrize("text", ["", "abc", "9,8", "1,2,3", "0,0", "(1,-1)"])
def test_parse_content_errors(text):
    with pytest.raises(ContentError):
        FieldContent.parse(text)


def test_content_properties():
    c = FieldContent((4, 4, 0))
    assert c.trimmed == (4, 4)
    assert c.n_susy == 4
    assert str(c) == "(4,4,0)"
