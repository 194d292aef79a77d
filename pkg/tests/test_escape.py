import numpy as np
import pytest

import oracles as O
from sl2lab.errors import KmaxExceeded, NotGenerating, OrbitTrapped
from sl2lab.escape import Variety, escape, find_rss, member, point_count
from sl2lab.field import make_field, quad_class
from sl2lab.group import GroupSet, Sl2Elem, is_rss, lower_unipotent, sl2, upper_unipotent
from sl2lab.growth import random_generating_set


def unipotents(F):
    return GroupSet.of([upper_unipotent(F), lower_unipotent(F)])


def test_point_counts_golden(golden):
    F = make_field(5)
    assert point_count(Variety.trace_equals(F, 1), F) == golden["v5_1"]
    assert point_count(Variety.abcd(F), F) == golden["abcd0_f5"]
    assert point_count(Variety.coordinate(F, 1), F, "A4") == 125
    assert point_count(Variety.determinant_one(F), F, "A4") == 120
    assert point_count(Variety.determinant_one(F), F) == 120


@pytest.mark.parametrize("p", [5, 7, 11])
def test_trace_variety_counts_follow_quad_class(p):
    F = make_field(p)
    Of = O.OracleField(p)
    elems = O.sl2_elements(Of)
    for t in F.elements():
        if t in (F.elem(2), F.elem(-2)):
            continue
        brute = O.trace_variety_size(Of, elems, t.enc)
        expect = p * (p + 1) if quad_class(t * t - 4) == "square" else p * (p - 1)
        assert brute == expect == point_count(Variety.trace_equals(F, t), F)


def test_member_and_json_roundtrip():
    F = make_field(3, 2)
    W = Variety.trace_square_is_4(F)
    G = sl2(F)
    for g in list(G.elements())[::37]:
        assert member(W, g) == (not is_rss(g))
    W2 = Variety.from_json(F, W.to_json())
    assert W2 == W
    V = Variety.from_json(F, '[[[[1, 0, 0, 0], [1, 2]], [[0, 0, 0, 0], 1]]]')
    assert point_count(V, F, "A4") == F.q ** 3


def test_zero_polynomial_rejected():
    F = make_field(5)
    with pytest.raises(ValueError):
        Variety.from_terms(F, [[((1, 0, 0, 0), 1), ((1, 0, 0, 0), 4)]])


def test_escape_examples():
    F = make_field(5)
    A = unipotents(F)
    e = Sl2Elem.identity(F)
    r = escape(A, Variety.coordinate(F, 2), e, 5)
    assert r.k_min == 1 and all(not member(Variety.coordinate(F, 2), w) for w in r.witnesses)
    with pytest.raises(OrbitTrapped):
        escape(A, Variety.determinant_one(F), e, 5)
    with pytest.raises(KmaxExceeded):
        escape(A, Variety.trace_square_is_4(F), e, 1)
    with pytest.raises(NotGenerating):
        escape(GroupSet.of([upper_unipotent(F)]), Variety.abcd(F), e, 3)


def test_find_rss_golden(golden):
    F = make_field(5)
    g, k = find_rss(unipotents(F))
    assert k == golden["find_rss_k_UL_f5"]
    assert is_rss(g)


def test_escape_from_non_rss_locus_f7():
    F = make_field(7)
    G = sl2(F)
    rng = np.random.default_rng(21)
    W = Variety.trace_square_is_4(F)
    for _ in range(30):
        A = random_generating_set(G, 2, rng)
        r = escape(A, W, Sl2Elem.identity(F), 4)
        assert r.k_min <= 2
        assert r.empirical_c == r.witness_count / len(A)
