
import pytest

from sl2lab.bgfamily import (FAMILY_COLUMNS, FamilyRow, IntMat2, PRESETS, alphabet, family_scan,
                             free_ball_size, free_depth, load_generators, reduce_mod, reduced_words,
                             word_injectivity_check)
from sl2lab.cayley import girth
from sl2lab.errors import NotPrime
from sl2lab.group import GroupSet
from sl2lab.growth import inverse_set

TRIPLE3 = PRESETS["triple3"]
UNIPOTENT = PRESETS["unipotent"]


def test_intmat_determinant():
    with pytest.raises(ValueError):
        IntMat2(1, 1, 1, 1)
    g = IntMat2(2, 3, 1, 2)
    assert (g * g.inv()).is_identity()
    assert g.inv() * g == IntMat2(1, 0, 0, 1)


def test_load_generators():
    gens = load_generators('{"generators": [[[1,3],[0,1]], [[1,0],[3,1]]]}')
    assert gens == TRIPLE3


def test_reduce_mod(golden):
    for p in (2, 3, 5, 7):
        assert reduce_mod(TRIPLE3, p)[1] == golden["triple3_generated"][str(p)]
        assert reduce_mod(UNIPOTENT, p)[1]
    assert not reduce_mod([IntMat2(1, 0, 0, 1)], 5)[1]
    with pytest.raises(NotPrime):
        reduce_mod(TRIPLE3, 9)


def test_free_depth_golden(golden):
    for p, L in golden["free_depth"]["triple3"].items():
        assert free_depth(TRIPLE3, int(p)) == L
    for p, L in golden["free_depth"]["unipotent"].items():
        assert free_depth(UNIPOTENT, int(p)) == L


def test_free_depth_trivial_bound():
    # all generator entries <= p - 2 gives L >= 1
    for p in (5, 7, 13):
        assert free_depth(TRIPLE3, p) >= 1


def test_reduced_words_counts():
    for ell in range(5):
        n = sum(1 for _ in reduced_words(TRIPLE3, ell))
        assert n == (1 if ell == 0 else 4 * 3 ** (ell - 1))
    assert len(alphabet(TRIPLE3)) == 4


def test_word_injectivity(golden):
    assert word_injectivity_check(TRIPLE3, 101, 0) == 1
    assert word_injectivity_check(TRIPLE3, 101, 1) == 5
    L = free_depth(TRIPLE3, 101)
    for ell in range(L + 1):
        got = word_injectivity_check(TRIPLE3, 101, ell)
        assert got == free_ball_size(2, ell) == golden["triple3_word_counts_101"][ell]


def test_free_ball_size():
    assert [free_ball_size(2, l) for l in range(5)] == [1, 5, 17, 53, 161]
    assert free_ball_size(1, 3) == 7


def test_girth_above_free_depth_p11():
    A, gen = reduce_mod(TRIPLE3, 11)
    S = (A | inverse_set(A)) - GroupSet.identity(A.group)
    assert gen
    assert girth(S) >= free_depth(TRIPLE3, 11) + 1


def test_family_row_invariant():
    with pytest.raises(AssertionError):
        FamilyRow(7, True, girth_lb=5, girth_exact=4)


def test_family_scan_unipotent(golden):
    rows = family_scan(UNIPOTENT, [5, 7, 11, 13])
    for r in rows:
        assert r.generated and r.spectral_method == "dense"
        assert r.nu1 == pytest.approx(golden["nu1"]["unipotent"][str(r.p)], abs=1e-9)
        assert r.gap > 0
        assert r.girth_exact >= r.girth_lb
        assert isinstance(r.mix_steps, int)
    assert [r.p for r in rows] == [5, 7, 11, 13]


def test_family_scan_marks_non_generated():
    rows = family_scan(TRIPLE3, [3])
    assert not rows[0].generated
    assert rows[0].nu1 == "not-generated"
    with pytest.raises(NotPrime):
        family_scan(TRIPLE3, [4])


def test_family_scan_budget_marker():
    rows = family_scan(TRIPLE3, [11], vertex_budget=100)
    assert rows[0].diameter == "skipped"
    assert len(rows[0].as_row()) == len(FAMILY_COLUMNS)
