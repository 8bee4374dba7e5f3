from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmodscan.diffop import (
    EVEN,
    ODD,
    ConstLaurentOperator,
    DiffEntry,
    EchelonBasis,
    FieldSlot,
    GradedOperator,
    LambdaMarker,
    combine,
    compose,
    diagonal,
    flatten,
    graded_bracket,
    identity,
    localize,
    span_reduce,
)
from dmodscan.errors import NonlocalOperatorError, ParityError, PowerCapExceeded
from dmodscan.exactnum import PolyT

from .conftest import rationals

HALF = Fraction(1, 2)


def scalar(slots, entry):
    return GradedOperator(EVEN, slots, {(0, 0): entry})


def sl2(slots, lam):
    """H, Dil, K on a single boson at scaling dimension ``lam``."""
    H = identity(slots, 1)
    Dil = diagonal(slots, [DiffEntry({1: PolyT((0, -1)), 0: PolyT.constant(-lam)})])
    K = diagonal(slots, [DiffEntry({1: PolyT((0, 0, -1)), 0: PolyT((0, -2 * lam))})])
    return H, Dil, K


def test_leibniz_d_after_t(scalar_slot):
    d = scalar(scalar_slot, DiffEntry.const(1, 1))
    t = scalar(scalar_slot, DiffEntry.poly(PolyT((0, 1))))
    assert compose(d, t).entries[(0, 0)].to_text() == "1 * t^1 * d^1 + 1 * t^0 * d^0"


def test_compose_d_d(scalar_slot):
    d = scalar(scalar_slot, DiffEntry.const(1, 1))
    assert compose(d, d).entries[(0, 0)].to_text() == "1 * t^0 * d^2"


def test_compose_minus_t_d_squared(scalar_slot):
    x = scalar(scalar_slot, DiffEntry({1: PolyT((0, -1))}))
    assert compose(x, x).entries[(0, 0)].to_text() == "1 * t^2 * d^2 + 1 * t^1 * d^1"


def test_power_cap(scalar_slot):
    d2 = scalar(scalar_slot, DiffEntry.const(1, 2))
    with pytest.raises(PowerCapExceeded) as exc:
        compose(d2, d2, power_cap=3)
    assert exc.value.power == 4


def test_sl2_relations(scalar_slot):
    H, Dil, K = sl2(scalar_slot, HALF)
    assert flatten(graded_bracket(Dil, H)) == flatten(H)
    assert flatten(graded_bracket(H, K)) == flatten(Dil.scale(2))
    assert flatten(graded_bracket(Dil, K)) == flatten(K.scale(-1))


def test_bracket_of_even_with_itself_vanishes(scalar_slot):
    _, Dil, K = sl2(scalar_slot, Fraction(3, 7))
    assert graded_bracket(K, K).is_zero()
    assert graded_bracket(Dil, Dil).is_zero()


def test_odd_anticommutator(pair_slots):
    q = GradedOperator(ODD, pair_slots, {(0, 1): DiffEntry.const(1), (1, 0): DiffEntry.const(1, 1)})
    assert flatten(graded_bracket(q, q)) == flatten(identity(pair_slots, 1).scale(2))


def test_parity_is_enforced(pair_slots):
    with pytest.raises(ParityError):
        GradedOperator(EVEN, pair_slots, {(0, 1): DiffEntry.const(1)})


def test_flatten_examples(pair_slots):
    assert flatten(GradedOperator(EVEN, pair_slots)) == {}
    h = flatten(identity(pair_slots, 1))
    assert list(h.values()) == [1, 1]
    with pytest.raises(ValueError):
        flatten(identity(pair_slots).with_lambda(LambdaMarker.SYMBOLIC))


@given(rationals(), rationals(), rationals())
def test_flatten_is_linear(a, b, c):
    slots = (FieldSlot("x", EVEN, Fraction(0)),)
    x = scalar(slots, DiffEntry({1: PolyT((a, b))}))
    y = scalar(slots, DiffEntry({0: PolyT((c,)), 1: PolyT((1,))}))
    lhs = flatten(x + y)
    rhs = dict(flatten(x))
    for k, v in flatten(y).items():
        rhs[k] = rhs.get(k, 0) + v
    assert lhs == {k: v for k, v in rhs.items() if v}


@given(st.lists(rationals(5, 5), min_size=3, max_size=3), st.lists(rationals(5, 5), min_size=3, max_size=3))
def test_compose_is_associative(xs, ys):
    slots = (FieldSlot("x", EVEN, Fraction(0)),)
    a = scalar(slots, DiffEntry({1: PolyT(tuple(xs[:2])), 0: PolyT((xs[2],))}))
    b = scalar(slots, DiffEntry({1: PolyT((ys[0],)), 0: PolyT(tuple(ys[1:]))}))
    c = scalar(slots, DiffEntry({0: PolyT((0, 1))}))
    assert flatten(compose(compose(a, b), c)) == flatten(compose(a, compose(b, c)))


@given(rationals(), rationals())
def test_bracket_antisymmetry(a, b):
    slots = (FieldSlot("x", EVEN, Fraction(0)),)
    x = scalar(slots, DiffEntry({1: PolyT((0, a))}))
    y = scalar(slots, DiffEntry({1: PolyT((b, 0, 1))}))
    assert flatten(graded_bracket(x, y)) == flatten(graded_bracket(y, x).scale(-1))


def test_span_reduce_examples(scalar_slot):
    assert span_reduce([{0: 1}], {0: 2}) == (True, {}, [2])
    in_span, residual, _ = span_reduce([{0: 1}], {1: 1})
    assert not in_span and residual == {1: 1}

    H, Dil, K = sl2(scalar_slot, HALF)
    in_span, _, coords = span_reduce([flatten(H), flatten(Dil), flatten(K)], flatten(graded_bracket(Dil, K)))
    assert in_span
    assert coords == [0, 0, -1]


def test_span_reduce_rejects_dependent_basis():
    with pytest.raises(ValueError):
        span_reduce([{0: 1}, {0: 2}], {0: 1})


def test_echelon_basis_coordinates():
    eb = EchelonBasis()
    assert eb.insert({0: 1, 1: 1})
    assert eb.insert({1: 1})
    assert not eb.insert({0: 2, 1: 5})
    in_span, _, coords = eb.reduce({0: 2, 1: 5})
    assert in_span and coords == {0: 2, 1: 3}
    assert len(eb) == 2


def test_combine(scalar_slot):
    H, Dil, _ = sl2(scalar_slot, 0)
    out = combine([(2, H), (-1, Dil)])
    assert flatten(out) == flatten(H.scale(2) - Dil)
    with pytest.raises(ValueError):
        combine([])


def test_localize_and_nonlocal(pair_slots):
    t = ConstLaurentOperator.diagonal_powers(pair_slots, [1, 0])
    t_inv = ConstLaurentOperator.diagonal_powers(pair_slots, [-1, 0])
    q = GradedOperator(ODD, pair_slots, {(0, 1): DiffEntry.const(1), (1, 0): DiffEntry.const(1, 1)})
    dressed = localize(t.compose(ConstLaurentOperator.from_graded(q)).compose(t_inv))
    assert dressed.entries[(0, 1)].to_text() == "1 * t^0 * d^1"
    assert dressed.entries[(1, 0)].to_text() == "1 * t^0 * d^0"

    with pytest.raises(NonlocalOperatorError):
        localize(t_inv.compose(ConstLaurentOperator.from_graded(q)))


def test_permuted_moves_entries(pair_slots):
    q = GradedOperator(ODD, pair_slots, {(0, 1): DiffEntry.const(3)})
    p = q.permuted([1, 0])
    assert p.slots == (pair_slots[1], pair_slots[0])
    assert set(p.entries) == {(1, 0)}
