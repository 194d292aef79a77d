from fractions import Fraction

import numpy as np
import pytest

import oracles as O
from sl2lab.bgfamily import PRESETS
from sl2lab.cayley import (AdjacencyOperator, bfs, dense_spectrum, eig_bound, expansion_check, girth,
                           lambda2_sparse, lanczos_nu1, matvec, mixing_profile, verify_eig_bound,
                           verify_multiplicity)
from sl2lab.errors import CapExceeded, NotGenerating
from sl2lab.field import make_field
from sl2lab.group import GroupSet, Sl2Elem, sl2, upper_unipotent
from sl2lab.growth import inverse_set, random_symmetric_set


def walk_set(F, preset="unipotent"):
    A = GroupSet.of([Sl2Elem.of(F, *(v % F.p for v in (g.a, g.b, g.c, g.d))) for g in PRESETS[preset]], F)
    return (A | inverse_set(A)) - GroupSet.identity(A.group)


def test_diameter_golden(golden):
    for p in (2, 3, 5, 7):
        rep = bfs(walk_set(make_field(p)))
        assert rep.diameter == golden["diameters"][str(p)]
        assert rep.ball_sizes[-1] == p ** 3 - p
        assert all(a < b for a, b in zip(rep.ball_sizes, rep.ball_sizes[1:]))
    assert bfs(walk_set(make_field(3))).diameter == golden["d3"]


def test_bfs_needs_generation():
    F = make_field(5)
    with pytest.raises(NotGenerating):
        bfs(GroupSet.of([upper_unipotent(F)]))


def test_girth_golden(golden):
    assert girth(walk_set(make_field(5))) == golden["g5"]
    for p in (5, 7, 11):
        assert girth(walk_set(make_field(p))) == golden["girths"][str(p)]


def test_girth_involutions():
    # over F_2 both unipotents are involutions: no 2-cycles unless asked for
    S = walk_set(make_field(2))
    assert girth(S) == O.girth(O.OracleField(2), [(1, 1, 0, 1), (1, 0, 1, 1)])
    assert girth(S, count_involution_2cycles=True) == 2


def test_matvec_matches_explicit_matrix():
    F = make_field(5)
    Of = O.OracleField(5)
    S = walk_set(F)
    G = S.group
    elems = O.sl2_elements(Of)
    pos = {g: i for i, g in enumerate(elems)}
    M = np.zeros((G.order, G.order))
    for g in elems:
        for s in as_tuples(S):
            M[pos[g], pos[O.mmul(Of, s, g)]] += 1 / len(S)
    f = np.random.default_rng(0).standard_normal(G.order)
    assert np.allclose(matvec(f, S), M @ f, atol=1e-12)
    assert np.allclose(AdjacencyOperator(S).dense(), M)


def as_tuples(A):
    return [(g.a.enc, g.b.enc, g.c.enc, g.d.enc) for g in A]


def test_exact_matvec():
    S = walk_set(make_field(3))
    f = np.array([Fraction(i, 3) for i in range(S.group.order)], dtype=object)
    out = AdjacencyOperator(S).matvec(f)
    assert all(isinstance(x, Fraction) for x in out)
    assert np.allclose(out.astype(float), matvec(f.astype(float), S))


@pytest.mark.parametrize("preset", ["unipotent", "triple3"])
@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_nu1_golden(golden, preset, p):
    F = make_field(p)
    S = walk_set(F, preset)
    rep = dense_spectrum(S)
    assert rep.nu1 == pytest.approx(golden["nu1"][preset][str(p)], abs=1e-9)
    assert verify_multiplicity(rep, F)
    assert verify_eig_bound(rep, S)
    assert rep.trace_residual < 1e-6


def test_multiplicity_cluster_sizes():
    for p, need in ((7, 3), (13, 6)):
        rep = dense_spectrum(walk_set(make_field(p)))
        assert min(m for v, m in rep.clusters if abs(v - 1) > 1e-8) >= need


def test_eig_bound_large_sets():
    G7 = sl2(make_field(7))
    A = random_symmetric_set(G7, 100, np.random.default_rng(2))
    assert verify_eig_bound(dense_spectrum(A), A)
    G13 = sl2(make_field(13))
    A = random_symmetric_set(G13, 1900, np.random.default_rng(3))
    assert eig_bound(G13.order, len(A), 13) < 1
    assert verify_eig_bound(dense_spectrum(A), A)


def test_dense_cap(monkeypatch):
    S = walk_set(make_field(7))
    with pytest.raises(CapExceeded):
        dense_spectrum(S, cap=100)
    monkeypatch.setenv("SL2LAB_DENSE_CAP", "100")
    with pytest.raises(CapExceeded):
        dense_spectrum(S)


def test_lanczos_matches_dense():
    S = walk_set(make_field(13))
    dense = dense_spectrum(S).nu1
    res = lanczos_nu1(S, tol=1e-10)
    assert res.nu1 == pytest.approx(dense, abs=1e-8)
    assert res.residual <= 1e-10
    assert lambda2_sparse(walk_set(make_field(11), "triple3")) == pytest.approx(
        dense_spectrum(walk_set(make_field(11), "triple3")).nu1, abs=1e-6)


def test_triple3_gap_p61():
    S = walk_set(make_field(61), "triple3")
    res = lanczos_nu1(S, tol=1e-7)
    assert 0 < 1 - res.nu1 < 1


def test_mixing_identity_and_exact_mode():
    S = walk_set(make_field(5))
    fl = mixing_profile(S, 12)
    ex = mixing_profile(S, 12, exact=True)
    assert ex.exact and all(isinstance(x, Fraction) for x in ex.sq_norms)
    assert ex.identity_residual == 0
    assert np.allclose([float(x) for x in ex.sq_norms], fl.sq_norms, rtol=1e-12)
    assert fl.identity_residual < 1e-15
    # norms never increase for a symmetric walk (Young's inequality)
    assert all(b <= a + 1e-15 for a, b in zip(fl.norms, fl.norms[1:]))
    assert fl.norms[-1] >= 1 / np.sqrt(S.group.order) - 1e-15


def test_mixing_triple3_p101():
    S = walk_set(make_field(101), "triple3")
    prof = mixing_profile(S, 60)
    floor = 1 / np.sqrt(S.group.order)
    assert floor <= prof.norms[-1] <= 2 * floor


def test_expansion_golden(golden):
    F = make_field(7)
    G = sl2(F)
    S = walk_set(F)
    rng = np.random.default_rng(golden["expansion_half_f7"]["seed"])
    ranks = rng.choice(G.order, size=G.order // 2, replace=False)
    half = GroupSet(G, G.idx[ranks])
    assert expansion_check(S, half) == Fraction(golden["expansion_half_f7"]["ratio"])
