"""Varieties in the matrix coordinates (x1, x2, x3, x4) = (a, b, c, d), and
bounded searches for group elements that move a point off a variety."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, KmaxExceeded, OrbitTrapped
from .field import FieldParams
from .group import GroupSet, Sl2Elem, require_generating, sl2
from .growth import product, symmetrize

WITNESS_CAP = 1024
A4_CAP = 1 << 26


@dataclass(frozen=True)
class Polynomial:
    """Sum of coeff * a^e1 b^e2 c^e3 d^e4 over F_q."""
    terms: tuple  # ((e1, e2, e3, e4), FqElem)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("zero polynomial")
        merged: dict = {}
        for exps, coeff in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != 4 or min(exps) < 0:
                raise ValueError(f"bad exponent vector {exps}")
            merged[exps] = merged[exps] + coeff if exps in merged else coeff
        terms = tuple(sorted((e, c) for e, c in merged.items() if not c.is_zero()))
        if not terms:
            raise ValueError("zero polynomial")
        object.__setattr__(self, "terms", terms)

    @property
    def field(self) -> FieldParams:
        return self.terms[0][1].field

    def evaluate(self, a, b, c, d) -> np.ndarray:
        """Values (as encodings) at arrays of entry encodings."""
        F = self.field
        coords = [np.asarray(x, dtype=np.int64) for x in (a, b, c, d)]
        out = np.zeros(np.broadcast(*coords).shape, dtype=np.int64)
        cache: dict = {}
        for exps, coeff in self.terms:
            val = np.full(out.shape, coeff.enc, dtype=np.int64)
            for i, e in enumerate(exps):
                if e:
                    key = (i, e)
                    if key not in cache:
                        pw = np.ones_like(coords[i])
                        for _ in range(e):
                            pw = F.vmul(pw, coords[i])
                        cache[key] = pw
                    val = F.vmul(val, cache[key])
            out = F.vadd(out, val)
        return out


@dataclass(frozen=True)
class Variety:
    """Common zero locus of a list of polynomials."""
    polys: tuple
    dim_hint: int | None = None
    name: str = ""

    @property
    def field(self) -> FieldParams:
        return self.polys[0].field

    def contains(self, a, b, c, d) -> np.ndarray:
        mask = None
        for P in self.polys:
            z = P.evaluate(a, b, c, d) == 0
            mask = z if mask is None else (mask & z)
        return mask

    def contains_index(self, idx) -> np.ndarray:
        G = sl2(self.field)
        return self.contains(*G.decode(idx))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_terms(cls, F: FieldParams, polys, dim_hint=None, name="") -> "Variety":
        """polys: list of lists of ((e1, e2, e3, e4), coeff) with int or (c0, c1) coefficients."""
        return cls(tuple(Polynomial(tuple((tuple(e), F.elem(tuple(c) if isinstance(c, list) else c))
                                          for e, c in terms)) for terms in polys),
                   dim_hint, name)

    @classmethod
    def from_json(cls, F: FieldParams, text: str) -> "Variety":
        """{"polynomials": [[[[e1, e2, e3, e4], c], ...], ...], "dim": optional}"""
        data = json.loads(text)
        if isinstance(data, list):
            data = {"polynomials": data}
        return cls.from_terms(F, data["polynomials"], data.get("dim"), data.get("name", ""))

    def to_json(self) -> str:
        polys = [[[list(e), c.residue if isinstance(c.residue, int) else list(c.residue)]
                  for e, c in P.terms] for P in self.polys]
        out = {"polynomials": polys}
        if self.dim_hint is not None:
            out["dim"] = self.dim_hint
        if self.name:
            out["name"] = self.name
        return json.dumps(out)

    @classmethod
    def coordinate(cls, F: FieldParams, i: int) -> "Variety":
        """x_i = 0 (1-based)."""
        e = [0, 0, 0, 0]
        e[i - 1] = 1
        return cls.from_terms(F, [[(e, 1)]], name=f"x{i}=0")

    @classmethod
    def trace_equals(cls, F: FieldParams, t) -> "Variety":
        t = F.elem(t)
        terms = [((1, 0, 0, 0), F.one), ((0, 0, 0, 1), F.one)]
        if not t.is_zero():
            terms.append(((0, 0, 0, 0), -t))
        return cls((Polynomial(tuple(terms)),), 2, f"tr={t}")

    @classmethod
    def trace_square_is_4(cls, F: FieldParams) -> "Variety":
        """(x1 + x4)^2 - 4 = 0: the non-regular-semisimple locus."""
        return cls.from_terms(F, [[((2, 0, 0, 0), 1), ((1, 0, 0, 1), 2), ((0, 0, 0, 2), 1),
                                   ((0, 0, 0, 0), -4)]], 2, "tr^2=4")

    @classmethod
    def abcd(cls, F: FieldParams) -> "Variety":
        return cls.from_terms(F, [[((1, 1, 1, 1), 1)]], 2, "abcd=0")

    @classmethod
    def determinant_one(cls, F: FieldParams) -> "Variety":
        return cls.from_terms(F, [[((1, 0, 0, 1), 1), ((0, 1, 1, 0), -1), ((0, 0, 0, 0), -1)]],
                              3, "det=1")


def member(W: Variety, g: Sl2Elem) -> bool:
    return bool(W.contains(g.a.enc, g.b.enc, g.c.enc, g.d.enc))


def point_count(W: Variety, F: FieldParams, ambient: str = "SL2") -> int:
    """Number of F_q-points of W inside SL2 or the affine space A^4."""
    if W.field != F:
        raise ValueError("variety defined over another field")
    if ambient == "SL2":
        G = sl2(F)
        return int(np.count_nonzero(W.contains_index(G.idx)))
    if ambient != "A4":
        raise ValueError(f"unknown ambient {ambient!r}")
    q = F.q
    if q ** 4 > A4_CAP:
        raise CapExceeded(q ** 4, A4_CAP, what="affine space")
    total = 0
    ab = np.arange(q * q, dtype=np.int64)
    a, b = np.divmod(ab, q)
    for c in range(q):
        for d in range(q):
            total += int(np.count_nonzero(W.contains(a, b, c, d)))
    return total


@dataclass
class EscapeResult:
    k_min: int
    witness_count: int
    sym_power_size: int
    witnesses: list          # up to WITNESS_CAP, smallest canonical index first
    set_size: int

    @property
    def empirical_c(self) -> float:
        """witness_count / |A|, the measured escape constant."""
        return self.witness_count / self.set_size


def escape(A: GroupSet, W: Variety, x: Sl2Elem, kmax: int) -> EscapeResult:
    """Smallest k with some g in A_sym^k such that g x is off W (left action)."""
    require_generating(A)
    G = A.group
    xi = np.int64(x.index)
    # A generates G and left multiplication is transitive, so G x = G
    if np.all(W.contains_index(G.idx)):
        raise OrbitTrapped("the whole group lies on W")
    S = symmetrize(A)
    P = GroupSet.identity(G)
    for k in range(kmax + 1):
        if k:
            P = product(P, S)
        off = ~W.contains_index(G.mul(P.idx, xi))
        n = int(np.count_nonzero(off))
        if n:
            wit = [G.element(int(i)) for i in P.idx[off][:WITNESS_CAP]]
            return EscapeResult(k, n, len(P), wit, len(A))
    raise KmaxExceeded(kmax)


def find_rss(A: GroupSet, kmax: int = 10) -> tuple[Sl2Elem, int]:
    """A regular semisimple element of A_sym^k with k minimal (smallest index at that k)."""
    require_generating(A)
    G = A.group
    if G.q <= 3:
        raise ValueError("q > 3 required")
    S = symmetrize(A)
    P = GroupSet.identity(G)
    for k in range(1, kmax + 1):
        P = product(P, S)
        hit = G.rss_mask[P.ranks()]
        if np.any(hit):
            return G.element(int(P.idx[hit][0])), k
    raise KmaxExceeded(kmax)
