"""Algebraic invariants under randomly generated inputs."""

import numpy as np
from hypothesis import given, settings, strategies as st

from sl2lab.field import make_field
from sl2lab.group import GroupSet, sl2
from sl2lab.growth import (inverse_set, power_sym, product, symmetrize, verify_orbit_stab,
                           verify_plunnecke_chain, verify_ruzsa)

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2)]


@st.composite
def group_and_sets(draw, n_sets=3, max_size=12):
    p, alpha = draw(st.sampled_from(FIELDS))
    G = sl2(make_field(p, alpha))
    sets = []
    for _ in range(n_sets):
        ranks = draw(st.lists(st.integers(0, G.order - 1), min_size=1, max_size=max_size, unique=True))
        sets.append(GroupSet(G, G.idx[np.array(ranks)]))
    return G, sets


@st.composite
def field_elements(draw):
    p, alpha = draw(st.sampled_from(FIELDS + [(11, 1), (5, 2)]))
    F = make_field(p, alpha)
    x, y, z = (F.from_enc(draw(st.integers(0, F.q - 1))) for _ in range(3))
    return F, x, y, z


@settings(max_examples=200, deadline=None)
@given(field_elements())
def test_field_axioms(data):
    F, x, y, z = data
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x + (-x) == F.zero
    if not x.is_zero():
        assert x * x.inverse() == F.one


@settings(max_examples=150, deadline=None)
@given(group_and_sets())
def test_group_laws_on_sets(data):
    G, (A, B, C) = data
    assert product(product(A, B), C) == product(A, product(B, C))
    assert inverse_set(product(A, B)) == product(inverse_set(B), inverse_set(A))
    assert inverse_set(inverse_set(A)) == A
    assert len(product(A, B)) >= max(len(A), len(B))
    S = symmetrize(A)
    sizes = [len(power_sym(A, k)) for k in (1, 2, 3)]
    assert sizes == sorted(sizes) and sizes[0] == len(S)


@settings(max_examples=150, deadline=None)
@given(group_and_sets())
def test_growth_inequalities(data):
    G, (A, B, C) = data
    assert verify_ruzsa(A, B, C).holds
    assert verify_plunnecke_chain(A, 3).holds
    S = symmetrize(B)
    assert verify_plunnecke_chain(S, 4, require_symmetric=True).holds
    x = C.min_element()
    assert verify_orbit_stab(A, B, x, "conjugation").holds


@settings(max_examples=100, deadline=None)
@given(group_and_sets(n_sets=1, max_size=40))
def test_vectorised_products_match_python_sets(data):
    G, (A,) = data
    ref = {int(G.mul(a, b)) for a in A.idx for b in A.idx}
    assert set(product(A, A).idx.tolist()) == ref
