import numpy as np
import pytest

import oracles as O
from sl2lab.errors import NotGenerating, NotInSL2
from sl2lab.field import make_field, quad_class
from sl2lab.group import (GroupSet, Sl2Elem, centralizer, conjugacy_class, count_tori, diag,
                          enumerate_group, generates, inv, is_rss, lower_unipotent, mul,
                          require_generating, sl2, torus_kind, trace, trace_variety, upper_unipotent)

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)]


def test_not_in_sl2():
    F = make_field(5)
    with pytest.raises(NotInSL2):
        Sl2Elem.of(F, 1, 1, 1, 1)


def test_hand_product(golden):
    F = make_field(5)
    UL = mul(upper_unipotent(F), lower_unipotent(F))
    assert [x for row in UL.rows() for x in row] == golden["UL_f5"]
    assert trace(UL).residue == golden["trace_UL_f5"]


@pytest.mark.parametrize("p,alpha", FIELDS)
def test_enumeration_matches_brute_force(p, alpha, golden):
    F = make_field(p, alpha)
    G = sl2(F)
    Of = O.OracleField(p, alpha)
    ref = [O.index(Of, g) for g in O.sl2_elements(Of)]
    assert list(G.idx) == ref
    assert G.order == F.q ** 3 - F.q == golden["orders"][str(F.q)]
    assert [g.index for g in enumerate_group(F)] == ref


@pytest.mark.parametrize("p,alpha", FIELDS)
def test_vectorised_mul_matches_oracle(p, alpha):
    F = make_field(p, alpha)
    G = sl2(F)
    Of = O.OracleField(p, alpha)
    rng = np.random.default_rng(1)
    x = G.idx[rng.integers(G.order, size=200)]
    y = G.idx[rng.integers(G.order, size=200)]
    got = G.mul(x, y)
    for a, b, c in zip(x, y, got):
        ga, gb = G.element(int(a)), G.element(int(b))
        ref = O.mmul(Of, tuple(e.enc for e in (ga.a, ga.b, ga.c, ga.d)),
                     tuple(e.enc for e in (gb.a, gb.b, gb.c, gb.d)))
        assert O.index(Of, ref) == c
    assert np.all(G.mul(x, G.inv(x)) == G.e)


def test_rank_roundtrip():
    G = sl2(make_field(7))
    assert np.array_equal(G.rank(G.idx), np.arange(G.order))
    assert G.element(int(G.idx[17])).index == G.idx[17]


def test_is_rss_examples():
    F = make_field(5)
    assert is_rss(diag(F, 2))                 # trace 2 + 3 = 0
    assert not is_rss(upper_unipotent(F))
    assert not is_rss(-Sl2Elem.identity(F))


def test_centralizer_examples():
    F = make_field(5)
    C = centralizer(diag(F, 2))
    assert len(C) == F.q - 1
    assert all(g.b.is_zero() and g.c.is_zero() for g in C)
    G = sl2(F)
    for r in np.flatnonzero(G.rss_mask):
        g = G.element(int(G.idx[r]))
        kind = torus_kind(g.trace())
        size = len(centralizer(g))
        assert size == (F.q - 1 if kind == "split" else F.q + 1)
        assert quad_class(g.trace() ** 2 - 4) == ("square" if kind == "split" else "nonsquare")
        assert len(conjugacy_class(g)) == G.order // size


def test_centralizer_brute_force():
    F = make_field(7)
    Of = O.OracleField(7)
    G = sl2(F)
    elems = O.sl2_elements(Of)
    for r in (0, 50, 101, 200, 335):
        g = G.element(int(G.idx[r]))
        ref = sorted(O.index(Of, h) for h in O.centralizer(Of, elems, (g.a.enc, g.b.enc, g.c.enc, g.d.enc)))
        assert list(centralizer(g).idx) == ref


def test_trace_varieties(golden):
    F = make_field(5)
    assert len(trace_variety(F.zero)) == golden["v5_0"]
    assert len(trace_variety(F.one)) == golden["v5_1"]
    for p in (5, 7, 11):
        F = make_field(p)
        G = sl2(F)
        assert sum(len(trace_variety(t)) for t in F.elements()) == G.order
        for t in F.elements():
            if t in (F.elem(2), F.elem(-2)):
                continue
            n = len(trace_variety(t))
            assert n == (p * (p + 1) if quad_class(t * t - 4) == "square" else p * (p - 1))


def test_count_tori(golden):
    for q, (p, alpha) in (("3", (3, 1)), ("4", (2, 2)), ("5", (5, 1)), ("7", (7, 1))):
        tc = count_tori(make_field(p, alpha))
        assert [tc.n_split, tc.n_nonsplit] == golden["tori"][q]
        assert tc.pairwise_ok
    for p in (5, 7):
        F = make_field(p)
        tc = count_tori(F)
        G = sl2(F)
        assert tc.n_split + tc.n_nonsplit >= 0.5 * G.order / (F.q + 1)


def test_group_set_algebra():
    F = make_field(5)
    G = sl2(F)
    A = GroupSet.of([upper_unipotent(F), lower_unipotent(F)])
    B = GroupSet.of([upper_unipotent(F), Sl2Elem.identity(F)])
    assert len(A | B) == 3 and len(A & B) == 1 and len(A - B) == 1
    assert (A & B).issubset(A)
    assert GroupSet.whole(G).is_whole()
    assert upper_unipotent(F) in A
    assert A == GroupSet.of(list(A))


def test_generation(golden):
    for p in (2, 3, 5, 7):
        F = make_field(p)
        A = GroupSet.of([upper_unipotent(F), lower_unipotent(F)])
        assert generates(A) == golden["unipotent_generated"][str(p)]
    F = make_field(5)
    with pytest.raises(NotGenerating):
        require_generating(GroupSet.of([upper_unipotent(F)]))


def test_inverse_and_power():
    F = make_field(3, 2)
    g = upper_unipotent(F, F.elem((1, 1)))
    assert g ** 3 == Sl2Elem.identity(F)     # unipotent in characteristic 3
    assert inv(g) * g == Sl2Elem.identity(F)
    assert g ** -1 == inv(g)
