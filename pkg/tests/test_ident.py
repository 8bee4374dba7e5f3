from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dmodscan.checks.closure import N8_EXPECTED
from dmodscan.diffop import EVEN, ODD
from dmodscan.errors import SignatureError
from dmodscan.exactnum import rank
from dmodscan.ident import (
    D21_ALPHA,
    DEFAULT_CATALOGUE,
    AlphaOrbit,
    ClosedSuperalgebra,
    change_basis,
    extract_alpha,
    identify,
    is_unidentified,
    killing_form,
    is_degenerate_d21,
    killing_rank,
    r_symmetry_basis,
    super_jacobi,
)
from dmodscan.scf import find_critical
from dmodscan.susy import FieldContent

from .conftest import closed_algebra, rationals


def diagonal_matrix(values):
    n = len(values)
    return [[Fraction(values[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def test_osp12_weights_and_jacobi(osp12):
    assert osp12.labels == ("H", "Dil", "K", "Q1", "S1")
    assert osp12.weights() == [1, 0, -1, Fraction(1, 2), Fraction(-1, 2)]
    assert super_jacobi(osp12)
    assert identify(osp12) == "B(0,1)"


def test_corrupted_constant_breaks_jacobi(osp12):
    q, s, dil = osp12.index("Q1"), osp12.index("S1"), osp12.index("Dil")
    assert not super_jacobi(osp12.with_constant(q, s, dil, Fraction(7)))


def test_killing_form(osp12):
    B = killing_form(osp12)
    h, k = osp12.index("H"), osp12.index("K")
    assert B[h][h] == 0
    assert B[h][k] != 0
    assert B[h][k] == B[k][h]
    assert killing_rank(osp12) == 5


def test_change_basis_keeps_identification(osp12):
    scaled = change_basis(osp12, diagonal_matrix([2, 1, 3, Fraction(1, 2), 5]))
    assert super_jacobi(scaled)
    assert scaled.signature == osp12.signature
    assert identify(scaled) == identify(osp12)
    assert killing_rank(scaled) == killing_rank(osp12)


def test_change_basis_rejects_parity_mixing(osp12):
    m = diagonal_matrix([1] * 5)
    m[0][3] = Fraction(1)
    with pytest.raises(ValueError):
        change_basis(osp12, m)


def test_catalogue():
    entries = list(DEFAULT_CATALOGUE)
    assert len(entries) == 17
    assert {e.name for e in entries if e.exceptional} == {D21_ALPHA, "G(3)", "F(4)"}
    assert [e.name for e in DEFAULT_CATALOGUE.lookup(2, 4, 4)] == ["A(1,0)", "C(2)"]
    assert DEFAULT_CATALOGUE.get("F(4)").r_dim == 21
    assert DEFAULT_CATALOGUE.get("nope") is None


def test_identify_n2_tie():
    alg = closed_algebra((1, 2, 1), Fraction(1, 3))
    name = identify(alg)
    assert name == "unidentified[N=2 4|4: A(1,0) | C(2)]"
    assert is_unidentified(name)


def test_identify_d21(d21_alpha_one):
    assert identify(d21_alpha_one) == D21_ALPHA
    assert 2 in extract_alpha(d21_alpha_one)


def fake_algebra(n_susy, even, odd):
    return ClosedSuperalgebra(
        tuple(f"e{i}" for i in range(even + odd)), (EVEN,) * even + (ODD,) * odd, {}, n_susy
    )


def test_identify_degenerate_six_eight():
    alg = fake_algebra(4, 6, 8)
    assert identify(alg) == f"unidentified[N=4 6|8: degenerate {D21_ALPHA} limit]"
    assert extract_alpha(alg).degenerate


def test_identify_unknown_signature():
    assert identify(fake_algebra(3, 5, 6)) == "unidentified[N=3 5|6]"


def test_extract_alpha_needs_nine_eight(osp12):
    with pytest.raises(SignatureError, match="9\|8"):
        extract_alpha(osp12)


def test_alpha_orbit_of_two():
    orbit = AlphaOrbit.of(Fraction(2))
    assert orbit.to_strings() == ["-3", "-3/2", "-2/3", "-1/3", "1/2", "2"]
    assert orbit.canonical == -3
    assert not orbit.degenerate


def test_degenerate_orbit():
    orbit = AlphaOrbit.degenerate_orbit()
    assert orbit.values == {0, -1}
    assert orbit.degenerate
    assert AlphaOrbit.of(Fraction(-1)) == orbit


@given(rationals())
def test_alpha_orbit_is_closed(alpha):
    assume(alpha not in (0, -1))
    orbit = AlphaOrbit.of(alpha)
    assert alpha in orbit
    for image in orbit.values:
        assert AlphaOrbit.of(image).values == orbit.values


@pytest.mark.parametrize(
    "counts, lam, alpha",
    [((0, 4, 4), Fraction(1, 2), Fraction(1)), ((1, 4, 3), Fraction(3), Fraction(3))],
)
def test_extract_alpha(counts, lam, alpha):
    orbit = extract_alpha(closed_algebra(counts, lam))
    assert alpha in orbit
    assert not orbit.degenerate


def test_extract_alpha_degenerate_at_d2():
    alg = closed_algebra((2, 4, 2), Fraction(1, 3))
    assert extract_alpha(alg) == AlphaOrbit.degenerate_orbit()
    assert alg.signature == "7|8"
    assert identify(alg) == f"unidentified[N=4 7|8: degenerate {D21_ALPHA} limit]"


@pytest.mark.parametrize("even", [6, 7])
def test_degenerate_signatures(even):
    alg = fake_algebra(4, even, 8)
    assert is_degenerate_d21(alg)
    assert "degenerate" in identify(alg)
    assert extract_alpha(alg) == AlphaOrbit.degenerate_orbit()


def test_non_degenerate_signatures():
    assert not is_degenerate_d21(fake_algebra(4, 9, 8))
    assert not is_degenerate_d21(fake_algebra(5, 7, 8))
    with pytest.raises(SignatureError):
        extract_alpha(fake_algebra(4, 5, 8))


@pytest.mark.parametrize("d, lam", [(3, 1), (4, Fraction(1, 2))])
def test_extract_alpha_degenerate_alpha_minus_one(d, lam):
    assert extract_alpha(closed_algebra((d, 4, 4 - d), lam)).degenerate


def test_alpha_orbit_independent_of_dimension_and_lambda(d21_alpha_one):
    # alpha = (2 - D) lambda: 2, 1/2, 2, -3, -3 all lie in one orbit
    points = [((0, 4, 4), Fraction(1, 4)), ((1, 4, 3), 2), ((1, 4, 3), -3), ((3, 4, 1), 3)]
    expected = extract_alpha(d21_alpha_one)
    assert expected == AlphaOrbit.of(Fraction(2))
    for counts, lam in points:
        assert extract_alpha(closed_algebra(counts, lam)) == expected


def invertible_blocks():
    entries = st.integers(-3, 3)
    return st.tuples(
        st.lists(st.lists(entries, min_size=3, max_size=3), min_size=3, max_size=3),
        st.lists(st.lists(entries, min_size=2, max_size=2), min_size=2, max_size=2),
    )


def block_matrix(even_block, odd_block):
    # osp12 basis order is H, Dil, K | Q1, S1
    m = [[Fraction(0)] * 5 for _ in range(5)]
    for i in range(3):
        for j in range(3):
            m[i][j] = Fraction(even_block[i][j])
    for i in range(2):
        for j in range(2):
            m[3 + i][3 + j] = Fraction(odd_block[i][j])
    return m


@settings(max_examples=25, deadline=None)
@given(invertible_blocks())
def test_identify_invariant_under_general_basis_change(osp12, blocks):
    even_block, odd_block = blocks
    m = block_matrix(even_block, odd_block)
    assume(rank([row[:3] for row in m[:3]]) == 3 and rank([row[3:] for row in m[3:]]) == 2)
    assume(any(m[i][j] for i in range(5) for j in range(5) if i != j))
    changed = change_basis(osp12, m)
    assert super_jacobi(changed)
    assert changed.signature == "3|2"
    assert identify(changed) == identify(osp12) == "B(0,1)"
    assert killing_rank(changed) == killing_rank(osp12)


@pytest.mark.slow
def test_d22_killing_form_is_nondegenerate():
    res = find_critical(FieldContent((3, 8, 5)))
    alg = res.witnesses[0]
    assert identify(alg) == "D(2,2)"
    assert killing_rank(alg) == 32


@pytest.mark.slow
@pytest.mark.parametrize("d, r_dim", [(0, 28), (1, 21), (2, 16), (3, 13)])
def test_n8_r_symmetry_dimension(d, r_dim):
    alg = find_critical(FieldContent((d, 8, 8 - d))).witnesses[0]
    assert identify(alg) == N8_EXPECTED[d]
    assert len(r_symmetry_basis(alg)) == r_dim
    assert DEFAULT_CATALOGUE.get(N8_EXPECTED[d]).r_dim == r_dim
