"""SL2(F_q): elements, canonical indexing, enumeration and structure.

A matrix [[a, b], [c, d]] has canonical index
``((enc(a)*q + enc(b))*q + enc(c))*q + enc(d)``.  The enumerated group is kept
as a sorted int64 array of canonical indices; the position of an element in
that array is its *rank*, a dense key in ``[0, |G|)`` used by every
group-sized vector (walk distributions, BFS distances, permutations).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import CapExceeded, FieldMismatch, NotGenerating, NotInSL2
from .field import FieldParams, FqElem, make_field, quad_class

GROUP_CAP = 5_000_000


@dataclass(frozen=True)
class Sl2Elem:
    a: FqElem
    b: FqElem
    c: FqElem
    d: FqElem

    def __post_init__(self):
        F = self.a.field
        if not (self.b.field == self.c.field == self.d.field == F):
            raise FieldMismatch("entries from different fields")
        if self.a * self.d - self.b * self.c != F.one:
            raise NotInSL2(f"det != 1 for {self.rows()}")

    @classmethod
    def of(cls, F: FieldParams, a, b, c, d) -> "Sl2Elem":
        return cls(F.elem(a), F.elem(b), F.elem(c), F.elem(d))

    @classmethod
    def identity(cls, F: FieldParams) -> "Sl2Elem":
        return cls.of(F, 1, 0, 0, 1)

    @property
    def field(self) -> FieldParams:
        return self.a.field

    def rows(self):
        return [[self.a.residue, self.b.residue], [self.c.residue, self.d.residue]]

    def __mul__(self, other: "Sl2Elem") -> "Sl2Elem":
        if not isinstance(other, Sl2Elem):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch("elements over different fields")
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Sl2Elem(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inv(self) -> "Sl2Elem":
        return Sl2Elem(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "Sl2Elem":
        return Sl2Elem(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, n: int) -> "Sl2Elem":
        base = self if n >= 0 else self.inv()
        n = abs(n)
        acc = Sl2Elem.identity(self.field)
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def trace(self) -> FqElem:
        return self.a + self.d

    @property
    def index(self) -> int:
        q = self.field.q
        return ((self.a.enc * q + self.b.enc) * q + self.c.enc) * q + self.d.enc

    def __repr__(self):
        (a, b), (c, d) = self.rows()
        return f"[[{a}, {b}], [{c}, {d}]]"


def mul(g: Sl2Elem, h: Sl2Elem) -> Sl2Elem:
    return g * h


def inv(g: Sl2Elem) -> Sl2Elem:
    return g.inv()


def trace(g: Sl2Elem) -> FqElem:
    return g.trace()


def is_rss(g: Sl2Elem) -> bool:
    """Regular semisimple: two distinct eigenvalues, i.e. trace not in {2, -2}."""
    t = g.trace()
    two = g.field.elem(2)
    return t != two and t != -two


def torus_kind(t: FqElem) -> str:
    """'split' or 'nonsplit' for the torus through an rss element of trace t.

    Decided by whether x^2 - t*x + 1 has a root in F_q; for odd q this is
    quad_class(t^2 - 4).
    """
    F = t.field
    if F.p != 2:
        cls = quad_class(t * t - 4)
        if cls == "zero":
            raise ValueError("trace +-2 is not regular semisimple")
        return "split" if cls == "square" else "nonsplit"
    xs = np.arange(F.q, dtype=np.int64)
    vals = F.vadd(F.vsub(F.vmul(xs, xs), F.vmul(xs, t.enc)), 1)
    return "split" if np.any(vals == 0) else "nonsplit"


class SL2:
    """Vectorised view of SL2(F_q) over canonical-index arrays.

    Obtain instances through :func:`sl2`, which caches one per field.
    """

    def __init__(self, F: FieldParams, cap: int = GROUP_CAP):
        order = F.q ** 3 - F.q
        if order > cap:
            raise CapExceeded(order, cap)
        self.field = F
        self.q = F.q
        self.order = order
        self.idx = self._enumerate()
        self.e = self.encode(1, 0, 0, 1)
        self.minus_e = self.encode(*(F.vneg(np.int64(v)) for v in (1, 0, 0, 1)))

    def _enumerate(self) -> np.ndarray:
        F, q = self.field, self.q
        parts = []
        # a != 0: b, c free and d = (1 + bc) / a
        b, c = np.meshgrid(np.arange(q, dtype=np.int64), np.arange(q, dtype=np.int64), indexing="ij")
        b, c = b.ravel(), c.ravel()
        one_bc = F.vadd(F.vmul(b, c), 1)
        for a in range(1, q):
            d = F.vmul(one_bc, F.inv_table[a])
            parts.append(self.encode(np.full_like(b, a), b, c, d))
        # a == 0: bc = -1, d free
        bs = np.arange(1, q, dtype=np.int64)
        cs = F.vneg(F.vinv(bs))
        bb, dd = np.meshgrid(bs, np.arange(q, dtype=np.int64), indexing="ij")
        cc = np.broadcast_to(cs[:, None], bb.shape)
        parts.append(self.encode(np.zeros(bb.size, dtype=np.int64), bb.ravel(), cc.ravel(), dd.ravel()))
        idx = np.sort(np.concatenate(parts))
        assert idx.size == self.order
        return idx

    # -- encoding ------------------------------------------------------------

    def encode(self, a, b, c, d):
        q = self.q
        return ((np.asarray(a, dtype=np.int64) * q + b) * q + c) * q + d

    def decode(self, idx):
        q = self.q
        idx = np.asarray(idx, dtype=np.int64)
        idx, d = np.divmod(idx, q)
        idx, c = np.divmod(idx, q)
        a, b = np.divmod(idx, q)
        return a, b, c, d

    def element(self, idx: int) -> Sl2Elem:
        a, b, c, d = (int(x) for x in self.decode(idx))
        F = self.field
        return Sl2Elem(F.from_enc(a), F.from_enc(b), F.from_enc(c), F.from_enc(d))

    def index_of(self, g: Sl2Elem) -> int:
        if g.field != self.field:
            raise FieldMismatch(f"{g} is not over {self.field}")
        return g.index

    # -- vectorised arithmetic -------------------------------------------------

    def mul(self, x, y):
        """Elementwise (broadcasting) product of canonical-index arrays."""
        F = self.field
        a, b, c, d = self.decode(x)
        e, f, g, h = self.decode(y)
        if F.alpha == 1:
            p = F.p
            return self.encode((a * e + b * g) % p, (a * f + b * h) % p,
                               (c * e + d * g) % p, (c * f + d * h) % p)
        m, s = F.vmul, F.vadd
        return self.encode(s(m(a, e), m(b, g)), s(m(a, f), m(b, h)),
                           s(m(c, e), m(d, g)), s(m(c, f), m(d, h)))

    def inv(self, x):
        F = self.field
        a, b, c, d = self.decode(x)
        return self.encode(d, F.vneg(b), F.vneg(c), a)

    def neg(self, x):
        F = self.field
        a, b, c, d = self.decode(x)
        return self.encode(F.vneg(a), F.vneg(b), F.vneg(c), F.vneg(d))

    def trace(self, x):
        a, _, _, d = self.decode(x)
        return self.field.vadd(a, d)

    def conj(self, g, x):
        """g x g^-1 (broadcasting)."""
        return self.mul(self.mul(g, x), self.inv(g))

    def rank(self, x, check: bool = True):
        x = np.asarray(x, dtype=np.int64)
        r = np.searchsorted(self.idx, x)
        if check:
            ok = (r < self.order) & (self.idx[np.minimum(r, self.order - 1)] == x)
            if not np.all(ok):
                raise NotInSL2("index does not decode to an SL2 element")
        return r

    def is_member_index(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        r = np.minimum(np.searchsorted(self.idx, x), self.order - 1)
        return self.idx[r] == x

    @cached_property
    def rss_mask(self) -> np.ndarray:
        t = self.trace(self.idx)
        two = 2 % self.field.p
        return (t != two) & (t != self.field.vneg(np.int64(two)))

    def left_perm(self, a: int) -> np.ndarray:
        """rank(g) -> rank(a g) for every g."""
        return self.rank(self.mul(np.int64(a), self.idx), check=False)

    def elements(self) -> Iterator[Sl2Elem]:
        for i in self.idx:
            yield self.element(int(i))


@lru_cache(maxsize=8)
def _sl2_cached(F: FieldParams, cap: int) -> SL2:
    return SL2(F, cap)


def sl2(F: FieldParams, cap: int = GROUP_CAP) -> SL2:
    return _sl2_cached(F, cap)


def enumerate_group(F: FieldParams, cap: int = GROUP_CAP) -> Iterator[Sl2Elem]:
    """All determinant-one matrices, in increasing canonical-index order."""
    return sl2(F, cap).elements()


class GroupSet:
    """Exact subset of SL2(F_q), stored as a sorted array of canonical indices."""

    __slots__ = ("group", "idx")

    def __init__(self, group: SL2, idx=(), *, trusted: bool = False):
        self.group = group
        arr = np.asarray(idx, dtype=np.int64).ravel()
        if not trusted:
            arr = np.unique(arr)
            if arr.size and not np.all(group.is_member_index(arr)):
                raise NotInSL2("set contains indices outside SL2")
        self.idx = arr

    @classmethod
    def of(cls, elems: Iterable[Sl2Elem], F: FieldParams | None = None) -> "GroupSet":
        elems = list(elems)
        if F is None:
            if not elems:
                raise ValueError("field required for an empty set")
            F = elems[0].field
        if any(g.field != F for g in elems):
            raise FieldMismatch("elements over different fields")
        return cls(sl2(F), [g.index for g in elems], trusted=False)

    @classmethod
    def from_mask(cls, group: SL2, mask: np.ndarray) -> "GroupSet":
        return cls(group, group.idx[mask], trusted=True)

    @classmethod
    def whole(cls, group: SL2) -> "GroupSet":
        return cls(group, group.idx, trusted=True)

    @classmethod
    def identity(cls, group: SL2) -> "GroupSet":
        return cls(group, [group.e], trusted=True)

    @property
    def field(self) -> FieldParams:
        return self.group.field

    @property
    def is_dense(self) -> bool:
        return self.idx.size > self.group.order / 64

    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.group.rank(self.idx, check=False)] = True
        return m

    def ranks(self) -> np.ndarray:
        return self.group.rank(self.idx, check=False)

    def __len__(self):
        return int(self.idx.size)

    def __iter__(self) -> Iterator[Sl2Elem]:
        for i in self.idx:
            yield self.group.element(int(i))

    def elements(self) -> list[Sl2Elem]:
        return list(self)

    def contains_index(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.idx.size == 0:
            return np.zeros(x.shape, dtype=bool)
        r = np.minimum(np.searchsorted(self.idx, x), self.idx.size - 1)
        return self.idx[r] == x

    def __contains__(self, g: Sl2Elem) -> bool:
        return g.field == self.field and bool(self.contains_index(g.index))

    def _check(self, other: "GroupSet"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __eq__(self, other):
        if not isinstance(other, GroupSet):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.idx, other.idx)

    def __hash__(self):
        return hash((self.field, self.idx.tobytes()))

    def __or__(self, other: "GroupSet") -> "GroupSet":
        self._check(other)
        return GroupSet(self.group, np.union1d(self.idx, other.idx), trusted=True)

    def __and__(self, other: "GroupSet") -> "GroupSet":
        self._check(other)
        return GroupSet(self.group, np.intersect1d(self.idx, other.idx, assume_unique=True), trusted=True)

    def __sub__(self, other: "GroupSet") -> "GroupSet":
        self._check(other)
        return GroupSet(self.group, np.setdiff1d(self.idx, other.idx, assume_unique=True), trusted=True)

    def issubset(self, other: "GroupSet") -> bool:
        self._check(other)
        return bool(np.all(other.contains_index(self.idx)))

    def is_whole(self) -> bool:
        return len(self) == self.group.order

    def map(self, fn) -> "GroupSet":
        """Image under a vectorised index map (e.g. conjugation)."""
        return GroupSet(self.group, np.unique(fn(self.idx)), trusted=True)

    def min_element(self) -> Sl2Elem:
        return self.group.element(int(self.idx[0]))

    def __repr__(self):
        return f"GroupSet({self.field}, size={len(self)})"


def generated_subgroup_size(A: GroupSet) -> int:
    """Size of the subgroup <A>, by breadth-first closure under left multiplication."""
    G = A.group
    gens = np.union1d(A.idx, G.inv(A.idx))
    seen = np.zeros(G.order, dtype=bool)
    start = G.rank(np.array([G.e]))
    seen[start] = True
    frontier = G.idx[start]
    while frontier.size:
        nxt = G.mul(gens[:, None], frontier[None, :]).ravel()
        r = np.unique(G.rank(nxt, check=False))
        r = r[~seen[r]]
        seen[r] = True
        frontier = G.idx[r]
    return int(seen.sum())


def generates(A: GroupSet) -> bool:
    return generated_subgroup_size(A) == A.group.order


def require_generating(A: GroupSet):
    reached = generated_subgroup_size(A)
    if reached != A.group.order:
        raise NotGenerating(reached, A.group.order)


# -- structural operations -------------------------------------------------------


def centralizer(g: Sl2Elem) -> GroupSet:
    """C(g) = {h : hg = gh}, by brute force over the enumerated group."""
    G = sl2(g.field)
    x = np.int64(g.index)
    mask = G.mul(G.idx, x) == G.mul(x, G.idx)
    return GroupSet.from_mask(G, mask)


def conjugacy_class(g: Sl2Elem) -> GroupSet:
    G = sl2(g.field)
    return GroupSet(G, np.unique(G.conj(G.idx, np.int64(g.index))), trusted=True)


def trace_variety(t: FqElem) -> GroupSet:
    """V_t: all elements of trace t."""
    G = sl2(t.field)
    return GroupSet.from_mask(G, G.trace(G.idx) == t.enc)


@dataclass(frozen=True)
class ToriCount:
    n_split: int
    n_nonsplit: int
    pairwise_ok: bool
    tori: tuple  # of GroupSet


def maximal_tori(F: FieldParams) -> list[GroupSet]:
    """Distinct centralizers of regular semisimple elements."""
    G = sl2(F)
    covered = np.zeros(G.order, dtype=bool)
    tori = []
    for r in np.flatnonzero(G.rss_mask):
        if covered[r]:
            continue
        T = centralizer(G.element(int(G.idx[r])))
        covered[T.ranks()] = True
        tori.append(T)
    return tori


def count_tori(F: FieldParams) -> ToriCount:
    """Count maximal tori by size (q-1 split, q+1 non-split) and check pairwise
    intersections are exactly {e, -e}."""
    G = sl2(F)
    tori = maximal_tori(F)
    centre = np.unique([G.e, G.minus_e])
    n_split = sum(1 for T in tori if len(T) == F.q - 1)
    n_nonsplit = sum(1 for T in tori if len(T) == F.q + 1)
    if n_split + n_nonsplit != len(tori):
        raise AssertionError("torus of unexpected size")
    # every element outside the centre lies in at most one torus
    counts = np.zeros(G.order, dtype=np.int64)
    for T in tori:
        counts[T.ranks()] += 1
    centre_ranks = G.rank(centre)
    non_central = np.ones(G.order, dtype=bool)
    non_central[centre_ranks] = False
    pairwise_ok = bool(np.all(counts[non_central] <= 1)) and all(
        np.all(T.contains_index(centre)) for T in tori
    )
    return ToriCount(n_split, n_nonsplit, pairwise_ok, tuple(tori))


# standard unipotent generators
def upper_unipotent(F: FieldParams, x=1) -> Sl2Elem:
    return Sl2Elem.of(F, 1, x, 0, 1)


def lower_unipotent(F: FieldParams, x=1) -> Sl2Elem:
    return Sl2Elem.of(F, 1, 0, x, 1)


def diag(F: FieldParams, r) -> Sl2Elem:
    r = F.elem(r)
    return Sl2Elem(r, F.zero, F.zero, r.inverse())


__all__ = [
    "Sl2Elem", "SL2", "sl2", "GroupSet", "make_field", "mul", "inv", "trace", "is_rss",
    "torus_kind", "enumerate_group", "centralizer", "conjugacy_class", "trace_variety",
    "count_tori", "maximal_tori", "generated_subgroup_size", "generates", "require_generating",
    "upper_unipotent", "lower_unipotent", "diag", "ToriCount",
]
