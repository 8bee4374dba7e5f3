from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from dmodscan.diffop import ODD, DiffEntry, GradedOperator, flatten, graded_bracket
from dmodscan.errors import ConstructionError
from dmodscan.scf import (
    ClosureKind,
    build_generators,
    closure_residual,
    duality_check,
    find_critical,
    sample_lambdas,
    saturate,
)
from dmodscan.susy import FieldContent, GlobalMultiplet, build_multiplet


def generators(counts, lam):
    return build_generators(build_multiplet(FieldContent(tuple(counts))), Fraction(lam))


def test_generators_satisfy_relations():
    g = generators((1, 4, 3), 3)
    assert g.labels[:5] == ["H", "Dil", "K", "Q1", "Q2"]
    assert len(g.seed()) == 3 + 2 * 4
    for q in g.Q:
        assert flatten(graded_bracket(q, q)) == flatten(g.H.scale(2))
    assert all(s.parity == ODD for s in g.S)


def test_seed_operators_satisfy_graded_jacobi():
    ops = generators((1, 2, 1), Fraction(1, 3)).seed()
    for a, b, c in product(ops, repeat=3):
        sign = -1 if (a.parity and b.parity) else 1
        lhs = graded_bracket(a, graded_bracket(b, c))
        rhs = graded_bracket(graded_bracket(a, b), c) + graded_bracket(b, graded_bracket(a, c)).scale(sign)
        assert flatten(lhs) == flatten(rhs)


def test_generators_reject_bad_grading(pair_slots):
    q = GradedOperator(ODD, pair_slots, {(0, 1): DiffEntry.const(1, 1), (1, 0): DiffEntry.const(1, 1)})
    m = GlobalMultiplet(FieldContent((1, 1)), pair_slots, (q,))
    with pytest.raises(ConstructionError, match="Dil,Q1"):
        build_generators(m, Fraction(1, 2))


def test_osp12_residual_and_saturation():
    g = generators((1, 1), Fraction(1, 2))
    assert closure_residual(g) == {}
    report = saturate(g)
    assert report.closed
    assert report.dims == "3|2"
    assert report.labels == ("H", "Dil", "K", "Q1", "S1")


def test_d21_alpha_saturation(d21_alpha_one):
    assert d21_alpha_one.signature == "9|8"
    assert d21_alpha_one.labels[-6:] == ("R1", "R2", "R3", "R4", "R5", "R6")


def test_saturation_stops_at_dimension_cap():
    report = saturate(generators((0, 4, 4), 1), dim_cap=5)
    assert not report.closed
    assert "dimension exceeds cap 5" in report.diagnostic


def test_sample_lambdas():
    lams = sample_lambdas(6, [Fraction(0), Fraction(1, 2)])
    assert lams == [Fraction(k, 13) for k in (-5, -3, -1, 1, 3, 5)]
    avoided = sample_lambdas(4, [Fraction(-1, 13)])
    assert Fraction(1, 13) not in avoided
    assert len(avoided) == 4
    assert avoided == sorted(avoided)


@pytest.mark.parametrize("counts, name", [((1, 1, 0), "B(0,1)"), ((0, 1, 1), "B(0,1)")])
def test_n1_closes_for_any_lambda(counts, name):
    res = find_critical(FieldContent(counts), degree_bound=2)
    assert res.kind is ClosureKind.ANY
    assert res.names == (name,)
    rec = res.to_record()
    assert rec["kind"] == "AnyLambda"
    assert rec["critical_lambdas"] == []
    assert rec["dims"] == ["3|2"]
    assert rec["witness_lambda"] == "-5/13"


def test_n2_closes_for_any_lambda():
    res = find_critical(FieldContent((1, 2, 1)), degree_bound=2)
    assert res.kind is ClosureKind.ANY
    assert res.witnesses[0].signature == "4|4"


def test_find_critical_is_cached():
    content = FieldContent((1, 1, 0))
    assert find_critical(content, 2) is find_critical(content, 2)


def test_duality_rejects_self_dual():
    with pytest.raises(ValueError):
        duality_check(4)
    with pytest.raises(ValueError):
        duality_check(9)


@pytest.mark.slow
def test_n8_d1_critical_scaling():
    res = find_critical(FieldContent((1, 8, 7)))
    assert res.kind is ClosureKind.CRITICAL
    assert res.critical == (Fraction(-1, 3),)
    assert res.names == ("F(4)",)
    assert res.witnesses[0].signature == "24|16"
    assert res.to_record()["critical_lambdas"] == ["-1/3"]


@pytest.mark.slow
def test_n8_d4_never_closes():
    res = find_critical(FieldContent((4, 8, 4)))
    assert res.kind is ClosureKind.NEVER
    assert res.critical == ()
    assert "witness_lambda" not in res.to_record()


@pytest.mark.slow
def test_n7_closes_as_g3():
    res = find_critical(FieldContent((1, 7, 7, 1)))
    assert res.critical == (Fraction(-1, 4),)
    assert res.names == ("G(3)",)


@pytest.mark.slow
def test_duality_d1():
    assert duality_check(1) == (7, True)
