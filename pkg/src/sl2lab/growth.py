"""Product sets in SL2(F_q) and exact checks of the growth inequalities.

All verifiers compare integers (or Fractions); nothing here has a tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (BadG, EmptySet, FieldMismatch, NotInPower, NotRss, NotSplit,
                     NotSymmetric)
from .group import (GroupSet, SL2, Sl2Elem, centralizer, conjugacy_class, is_rss,
                    require_generating, trace_variety)

# products per vectorised chunk
_CHUNK = 1 << 21


def _same_group(*sets: GroupSet):
    F = sets[0].field
    for S in sets[1:]:
        if S.field != F:
            raise FieldMismatch(f"{F} vs {S.field}")


def product(A: GroupSet, B: GroupSet) -> GroupSet:
    """{xy : x in A, y in B}.

    The smaller operand is swept in chunks against the whole of the larger one.
    Results expected to be dense (> |G|/64 elements) are accumulated in a
    membership table over ranks, sparse ones as index lists.
    """
    _same_group(A, B)
    G = A.group
    if len(A) == 0 or len(B) == 0:
        return GroupSet(G, (), trusted=True)
    small_left = len(A) <= len(B)
    small, large = (A.idx, B.idx) if small_left else (B.idx, A.idx)
    step = max(1, _CHUNK // large.size)
    dense = len(A) * len(B) > G.order / 64
    if dense:
        hit = np.zeros(G.order, dtype=bool)
    else:
        parts = []
    for i in range(0, small.size, step):
        s = small[i:i + step, None]
        prod = G.mul(s, large[None, :]) if small_left else G.mul(large[None, :], s)
        if dense:
            hit[G.rank(prod.ravel(), check=False)] = True
        else:
            parts.append(prod.ravel())
    if dense:
        return GroupSet.from_mask(G, hit)
    return GroupSet(G, np.unique(np.concatenate(parts)), trusted=True)


def inverse_set(A: GroupSet) -> GroupSet:
    return A.map(A.group.inv)


def symmetrize(A: GroupSet) -> GroupSet:
    """A u A^-1 u {e}."""
    return A | inverse_set(A) | GroupSet.identity(A.group)


def is_symmetric(A: GroupSet) -> bool:
    return inverse_set(A) == A


def power(A: GroupSet, k: int) -> GroupSet:
    """A^k = A...A (k factors); A^0 = {e}."""
    if k < 0:
        raise ValueError("k must be >= 0")
    P = GroupSet.identity(A.group)
    for _ in range(k):
        P = product(P, A)
    return P


def power_sym(A: GroupSet, k: int) -> GroupSet:
    S = symmetrize(A)
    P = GroupSet.identity(A.group)
    for _ in range(k):
        if P.is_whole():
            break
        P = product(P, S)
    return P


def powers(A: GroupSet, kmax: int) -> list[GroupSet]:
    """[A^0, A^1, ..., A^kmax]."""
    out = [GroupSet.identity(A.group)]
    for _ in range(kmax):
        out.append(product(out[-1], A))
    return out


# -- inequality verifiers -----------------------------------------------------------


@dataclass(frozen=True)
class Inequality:
    """lhs <= rhs (or lhs >= rhs when ``kind == 'ge'``), evaluated exactly."""
    name: str
    lhs: Fraction
    rhs: Fraction
    kind: str = "le"

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs if self.kind == "le" else self.lhs >= self.rhs

    def as_dict(self):
        return {"name": self.name, "lhs": str(self.lhs), "rhs": str(self.rhs),
                "kind": self.kind, "holds": self.holds}


def _nonempty(*sets):
    for S in sets:
        if len(S) == 0:
            raise EmptySet("inequality needs nonempty sets")


def verify_ruzsa(A: GroupSet, B: GroupSet, C: GroupSet) -> Inequality:
    """|A C^-1| |B| <= |A B^-1| |B C^-1|."""
    _nonempty(A, B, C)
    _same_group(A, B, C)
    Binv = inverse_set(B)
    lhs = len(product(A, inverse_set(C))) * len(B)
    rhs = len(product(A, Binv)) * len(product(B, inverse_set(C)))
    return Inequality("ruzsa", Fraction(lhs), Fraction(rhs))


@dataclass
class PlunneckeReport:
    k: int
    sizes: dict
    sym_tripling: Inequality
    power_tripling: Inequality | None
    sym_power: Inequality
    sym_power_small_constant: Inequality
    symmetric: bool

    @property
    def holds(self) -> bool:
        checks = [self.sym_tripling, self.sym_power]
        if self.power_tripling is not None:
            checks.append(self.power_tripling)
        return all(c.holds for c in checks)


def verify_plunnecke_chain(A: GroupSet, k: int, require_symmetric: bool = False) -> PlunneckeReport:
    """Tripling bounds on higher powers.

    * sym_tripling:   |A_sym^3| / |A| <= (3 |A^3| / |A|)^3
    * power_tripling: |A^k| / |A| <= (|A^3| / |A|)^(k-2)          (A = A^-1 only)
    * sym_power:      |A^k| <= |A_sym^k| and
                    |A_sym^k| / |A| <= (3 |A^3| / |A|)^(3(k-2))

    The sym_power constant is the one obtained by chaining sym_tripling with power_tripling
    applied to A_sym.  ``sym_power_small_constant`` carries the same bound with 3^(k-2)
    in front instead of 27^(k-2); that version fails already for a single
    element of order >= 7, so it is reported and never enforced.
    """
    if k < 3:
        raise ValueError("k >= 3 required")
    _nonempty(A)
    symmetric = is_symmetric(A)
    if require_symmetric and not symmetric:
        raise NotSymmetric("power_tripling clause needs A = A^-1")
    n = len(A)
    A3 = len(power(A, 3))
    Ak = len(power(A, k))
    S3 = len(power_sym(A, 3))
    Sk = len(power_sym(A, k))
    tripling = Fraction(A3, n)
    sym_tripling = Inequality("sym_tripling", Fraction(S3, n), (3 * tripling) ** 3)
    power_tripling = Inequality("power_tripling", Fraction(Ak, n), tripling ** (k - 2)) if symmetric else None
    if Ak > Sk:
        raise AssertionError("A^k not contained in A_sym^k")
    sym_power = Inequality("sym_power", Fraction(Sk, n), (3 * tripling) ** (3 * (k - 2)))
    literal = Inequality("sym_power_small_constant", Fraction(Sk, n), 3 ** (k - 2) * tripling ** (3 * (k - 2)))
    sizes = {"A": n, "A3": A3, f"A{k}": Ak, "Asym3": S3, f"Asym{k}": Sk}
    return PlunneckeReport(k, sizes, sym_tripling, power_tripling, sym_power, literal, symmetric)


def verify_power_tripling(A: GroupSet, k: int) -> Inequality:
    rep = verify_plunnecke_chain(A, k, require_symmetric=True)
    return rep.power_tripling


# -- orbit-stabilizer for sets -------------------------------------------------------


@dataclass
class OrbitStabReport:
    action: str
    orbit_size: int      # |A x|
    stab_hits: int       # |A^-1 A  n  Stab(x)|
    stabilizer_lower: Inequality
    orbit_product: Inequality

    @property
    def holds(self) -> bool:
        return self.stabilizer_lower.holds and self.orbit_product.holds


def _orbit_keys(G: SL2, S: np.ndarray, x: Sl2Elem, action: str, H: GroupSet | None):
    """Key for each element's image of x, comparable across elements."""
    xi = np.int64(x.index)
    if action == "conjugation":
        return G.conj(S, xi)
    # left-coset action on G/H: key of g x H is its smallest canonical index
    gx = G.mul(S, xi)
    return G.mul(gx[:, None], H.idx[None, :]).min(axis=1)


def _stabilizer(G: SL2, x: Sl2Elem, action: str, H: GroupSet | None) -> GroupSet:
    if action == "conjugation":
        return centralizer(x)
    # Stab(xH) = x H x^-1
    return H.map(lambda h: G.conj(np.int64(x.index), h))


def verify_orbit_stab(A: GroupSet, B: GroupSet, x: Sl2Elem, action: str = "conjugation",
                      H: GroupSet | None = None) -> OrbitStabReport:
    """|A^-1 A n Stab(x)| >= |A| / |A x|   and   |B A| >= |A n Stab(x)| |B x|.

    ``action`` is 'conjugation' (x a group element, Stab(x) = C(x)) or
    'left-coset' (x a coset representative of G/H, H a supplied subgroup).
    """
    _nonempty(A, B)
    _same_group(A, B)
    if action not in ("conjugation", "left-coset"):
        raise ValueError(f"unknown action {action!r}")
    if action == "left-coset" and H is None:
        raise ValueError("left-coset action needs the subgroup H")
    G = A.group
    stab = _stabilizer(G, x, action, H)
    orbit_A = np.unique(_orbit_keys(G, A.idx, x, action, H)).size
    orbit_B = np.unique(_orbit_keys(G, B.idx, x, action, H)).size
    hits = len(product(inverse_set(A), A) & stab)
    apple = Inequality("stabilizer_lower", Fraction(hits), Fraction(len(A), orbit_A), kind="ge")
    easy = Inequality("orbit_product", Fraction(len(product(B, A))),
                      Fraction(len(A & stab) * orbit_B), kind="ge")
    return OrbitStabReport(action, orbit_A, hits, apple, easy)


def centralizer_bound(A: GroupSet, g: Sl2Elem, l: int) -> Inequality:
    """|A^-1 A n C(g)| >= |A| / |A^(l+1) A^-1 n Cl(g)|  for g in A^l."""
    _nonempty(A)
    if l < 1:
        raise ValueError("l >= 1 required")
    Al = power(A, l)
    if g not in Al:
        raise NotInPower(f"{g} is not in A^{l}")
    lhs = len(product(inverse_set(A), A) & centralizer(g))
    den = len(product(product(Al, A), inverse_set(A)) & conjugacy_class(g))
    return Inequality("centralizer_lower", Fraction(lhs), Fraction(len(A), den), kind="ge")


# -- pivots -----------------------------------------------------------------------


@dataclass(frozen=True)
class Pivot:
    xi: Sl2Elem


@dataclass(frozen=True)
class Collision:
    xi: Sl2Elem
    witness: Sl2Elem


def classify_pivot(A: GroupSet, xi: Sl2Elem, g: Sl2Elem) -> Pivot | Collision:
    """Decide whether (a, t) -> a xi t xi^-1 is injective modulo {e, -e}.

    Injectivity on (+-A)/{+-e} x C(g)/{+-e} -> G/{+-e} fails exactly when
    A^-1 A meets xi C(g) xi^-1 outside {e, -e}: a collision
    a1 xi t1 xi^-1 = +-a2 xi t2 xi^-1 gives a2^-1 a1 = +-xi t2 t1^-1 xi^-1, and
    conversely h = a2^-1 a1 = xi s xi^-1 with s != +-e makes (a1, e) and (a2, s)
    collide.  So only the intersection is computed; the witness is its
    smallest element outside the centre.
    """
    if len(A) == 0:
        raise EmptySet("A must be nonempty")
    if not is_rss(g):
        raise NotRss(f"{g} is not regular semisimple")
    G = A.group
    torus = centralizer(g).map(lambda t: G.conj(np.int64(xi.index), t))
    inter = product(inverse_set(A), A) & torus
    centre = GroupSet(G, [G.e, G.minus_e])
    rest = inter - centre
    if len(rest) == 0:
        return Pivot(xi)
    return Collision(xi, rest.min_element())


def pivot_injective_bruteforce(A: GroupSet, xi: Sl2Elem, g: Sl2Elem) -> bool:
    """Literal injectivity test of (a, t) -> a xi t xi^-1 modulo +-e."""
    G = A.group
    T = centralizer(g)
    x = np.int64(xi.index)
    a = A.idx[:, None]
    t = T.idx[None, :]
    img = G.mul(a, G.conj(x, t))
    img_key = np.minimum(img, G.neg(img))
    a_key = np.broadcast_to(np.minimum(a, G.neg(a)), img.shape)
    t_key = np.broadcast_to(np.minimum(t, G.neg(t)), img.shape)
    dom = np.unique(np.stack([a_key.ravel(), t_key.ravel()], axis=1), axis=0)
    pairs = np.unique(np.stack([a_key.ravel(), t_key.ravel(), img_key.ravel()], axis=1), axis=0)
    # the map is well defined on classes; injective iff #images == #domain classes
    return np.unique(pairs[:, 2]).size == dom.shape[0] == pairs.shape[0]


# -- growth report / trichotomy -------------------------------------------------------


@dataclass
class GrowthReport:
    sizes: list            # |A^1|, |A^2|, |A^3|
    sym_sizes: list        # |A_sym^1|, |A_sym^2|, |A_sym^3|
    delta_meas: float | None
    covered: bool          # A_sym^3 == G
    order: int

    @property
    def dichotomy_holds(self) -> bool:
        return self.sym_sizes[2] > self.sym_sizes[0] or self.covered

    def as_dict(self):
        return {"sizes": self.sizes, "sym_sizes": self.sym_sizes, "delta_meas": self.delta_meas,
                "covered": self.covered, "order": self.order,
                "dichotomy_holds": self.dichotomy_holds}


def delta_meas(size_a: int, size_a3: int) -> float | None:
    """log(|A^3|/|A|) / log|A|; None when |A| = 1."""
    if size_a <= 1:
        return None
    return math.log(size_a3 / size_a) / math.log(size_a)


def trichotomy(A: GroupSet, k: int = 3) -> GrowthReport:
    """Measure |A^3| against |A| and test whether A_sym^3 = G, for generating A."""
    require_generating(A)
    plain = powers(A, k)[1:]
    S = symmetrize(A)
    sym = [S]
    for _ in range(k - 1):
        sym.append(product(sym[-1], S))
    return GrowthReport(
        sizes=[len(P) for P in plain],
        sym_sizes=[len(P) for P in sym],
        delta_meas=delta_meas(len(A), len(plain[2])) if k >= 3 else None,
        covered=sym[2].is_whole() if k >= 3 else False,
        order=A.group.order,
    )


@dataclass(frozen=True)
class LargeSetResult:
    applies: bool
    holds: bool | None
    threshold: float
    size: int


def large_set_threshold(order: int) -> float:
    return 2.0 * order ** (8.0 / 9.0)


def large_set_check(A: GroupSet) -> LargeSetResult:
    """For symmetric A with |A| >= 2|G|^(8/9), check A^3 = G."""
    if not is_symmetric(A):
        raise NotSymmetric("large-set criterion assumes A = A^-1")
    thr = large_set_threshold(A.group.order)
    applies = len(A) >= thr
    holds = power(A, 3).is_whole() if applies else None
    return LargeSetResult(applies, holds, thr, len(A))


@dataclass(frozen=True)
class TorusExponents:
    r13: float
    r23: float
    torus_hits: int
    variety_hits: int
    sym_power_size: int


def torus_exponents(A: GroupSet, g: Sl2Elem, k: int) -> TorusExponents:
    """|A n C(g)| / |A_sym^k|^(1/3) and |A n V_tr(g)| / |A_sym^k|^(2/3).  Reporting only."""
    if not is_rss(g):
        raise NotRss(f"{g} is not regular semisimple")
    n = len(power_sym(A, k))
    hits_t = len(A & centralizer(g))
    hits_v = len(A & trace_variety(g.trace()))
    return TorusExponents(hits_t / n ** (1 / 3), hits_v / n ** (2 / 3), hits_t, hits_v, n)


# -- the explicit triple-product map on a split torus ---------------------------------


@dataclass(frozen=True)
class FiberReport:
    max_fiber: int
    excluded_s: int
    admissible_s: int
    domain_size: int
    image_size: int

    @property
    def holds(self) -> bool:
        return self.max_fiber <= 16 and self.excluded_s <= 4


def diagonalizer(T: GroupSet) -> Sl2Elem:
    """sigma in SL2(F_q) with sigma^-1 T sigma equal to the diagonal torus."""
    G = T.group
    F = T.field
    if len(T) != F.q - 1:
        raise NotSplit("torus is not split over F_q")
    D = _diagonal_torus(G)
    # T = sigma D sigma^-1; the first element of D after {+-e} pins sigma down
    probe = D.idx[~np.isin(D.idx, [G.e, G.minus_e])]
    if probe.size == 0:
        # q <= 3: the split torus is the centre
        if T == D:
            return G.element(int(G.e))
        raise NotSplit("torus is not the split torus")
    images = G.conj(G.idx, probe[0])
    for r in np.flatnonzero(T.contains_index(images)):
        sigma = G.idx[r]
        if T == D.map(lambda t: G.conj(sigma, t)):
            return G.element(int(sigma))
    raise NotSplit("torus is not conjugate to the diagonal torus")


def _diagonal_torus(G: SL2) -> GroupSet:
    a, b, c, d = G.decode(G.idx)
    return GroupSet.from_mask(G, (b == 0) & (c == 0))


def triple_product_closed_form(r, s, t, g: Sl2Elem):
    """Closed form of diag(r) g diag(s) g^-1 diag(t) for g = [[a, b], [c, d]]."""
    a, b, c, d = g.a, g.b, g.c, g.d
    si, ri, ti = s.inverse(), r.inverse(), t.inverse()
    return ((r * t * (s * a * d - si * b * c), r * ti * (si - s) * a * b),
            (ri * t * (s - si) * c * d, ri * ti * (si * a * d - s * b * c)))


def phi_fiber_check(g: Sl2Elem, T: GroupSet) -> FiberReport:
    """Largest fiber of (x, y, z) -> x g y g^-1 z on T^3 over admissible y.

    T is a split torus; coordinates are taken after conjugating T to diagonal
    form, which replaces g by sigma^-1 g sigma.  y = diag(s) is admissible when
    s != s^-1 and s a d != s^-1 b c.
    """
    G = T.group
    F = T.field
    sigma = diagonalizer(T)
    h = sigma.inv() * g * sigma
    if any(x.is_zero() for x in (h.a, h.b, h.c, h.d)):
        raise BadG(f"abcd = 0 for {h}")
    units = np.arange(1, F.q, dtype=np.int64)
    s_inv = F.vinv(units)
    ad = F.vmul(h.a.enc, h.d.enc)
    bc = F.vmul(h.b.enc, h.c.enc)
    adm = (units != s_inv) & (F.vmul(units, ad) != F.vmul(s_inv, bc))
    s_ok = units[adm]
    # diag(u) has canonical index encode(u, 0, 0, 1/u)
    def diag_idx(u):
        return G.encode(u, 0, 0, F.vinv(u))
    R = diag_idx(units)
    S = diag_idx(s_ok)
    hi, hinv = np.int64(h.index), np.int64(h.inv().index)
    mid = G.mul(G.mul(hi, S), hinv)                       # h y h^-1
    img = G.mul(G.mul(R[:, None, None], mid[None, :, None]), R[None, None, :])
    _, counts = np.unique(img.ravel(), return_counts=True)
    return FiberReport(
        max_fiber=int(counts.max()) if counts.size else 0,
        excluded_s=int(units.size - s_ok.size),
        admissible_s=int(s_ok.size),
        domain_size=int(img.size),
        image_size=int(counts.size),
    )


# -- random sets -----------------------------------------------------------------------


def random_set(G: SL2, size: int, rng: np.random.Generator) -> GroupSet:
    """``size`` distinct elements, drawn without replacement over the enumeration."""
    r = rng.choice(G.order, size=size, replace=False)
    return GroupSet(G, np.sort(G.idx[r]), trusted=True)


def random_symmetric_set(G: SL2, min_size: int, rng: np.random.Generator) -> GroupSet:
    """Symmetric set of size min_size or min_size + 1: shuffled elements added with inverses."""
    order = rng.permutation(G.order)
    chosen = np.zeros(G.order, dtype=bool)
    count = 0
    inv_rank = G.rank(G.inv(G.idx), check=False)
    for r in order:
        if count >= min_size:
            break
        if chosen[r]:
            continue
        chosen[r] = True
        count += 1
        ri = inv_rank[r]
        if not chosen[ri]:
            chosen[ri] = True
            count += 1
    return GroupSet.from_mask(G, chosen)


def random_generating_set(G: SL2, size: int, rng: np.random.Generator,
                          pool: np.ndarray | None = None, max_tries: int = 1000) -> GroupSet:
    from .group import generates

    source = G.idx if pool is None else pool
    for _ in range(max_tries):
        pick = rng.choice(source.size, size=size, replace=False)
        A = GroupSet(G, np.sort(source[pick]), trusted=True)
        if generates(A):
            return A
    raise RuntimeError(f"no generating set of size {size} found in {max_tries} draws")
