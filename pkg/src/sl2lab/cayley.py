"""Cayley graphs Gamma(G, A) with edges g -> a g: distances, girth, spectra, walks.

Functions on G are numpy vectors indexed by rank (position in the group
enumeration).  The normalised adjacency operator is

    (Af)(g) = 1/|A| * sum_{a in A} f(a g),

so the walk it drives multiplies on the left.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (BudgetExceeded, CapExceeded, DimensionMismatch, NoConvergence,
                     NotGenerating, NotSymmetric, TooLarge)
from .field import FieldParams
from .group import GroupSet
from .growth import is_symmetric, symmetrize

DENSE_CAP = 5000
DENSE_CAP_ENV = "SL2LAB_DENSE_CAP"
CLUSTER_TOL = 1e-8
TRACE_RTOL = 1e-6


def dense_cap() -> int:
    return int(os.environ.get(DENSE_CAP_ENV, DENSE_CAP))


def left_perms(A: GroupSet) -> np.ndarray:
    """Row i maps rank(g) -> rank(a_i g)."""
    G = A.group
    if len(A) == 0:
        return np.empty((0, G.order), dtype=np.int64)
    return np.stack([G.left_perm(a) for a in A.idx])


# -- distances -------------------------------------------------------------------------


@dataclass
class BallReport:
    ball_sizes: list   # |B_r| for r = 0, 1, ..., diameter
    diameter: int

    def rows(self):
        return [(r, n) for r, n in enumerate(self.ball_sizes)]


def bfs(A: GroupSet) -> BallReport:
    """Ball sizes of Gamma(G, A_sym) around e; the last radius is the diameter.

    Left-multiplication Cayley graphs are vertex transitive (g -> gh is an
    automorphism), so the eccentricity of e is the diameter.
    """
    G = A.group
    S = symmetrize(A)
    perms = left_perms(S - GroupSet.identity(G))
    dist = np.full(G.order, -1, dtype=np.int64)
    start = G.rank(np.array([G.e]))
    dist[start] = 0
    frontier = start
    sizes = [1]
    r = 0
    while frontier.size:
        nxt = np.unique(perms[:, frontier].ravel())
        nxt = nxt[dist[nxt] < 0]
        if nxt.size == 0:
            break
        r += 1
        dist[nxt] = r
        sizes.append(sizes[-1] + int(nxt.size))
        frontier = nxt
    if sizes[-1] != G.order:
        raise NotGenerating(sizes[-1], G.order)
    return BallReport(sizes, len(sizes) - 1)


def girth(A: GroupSet, count_involution_2cycles: bool = False,
          max_radius: int | None = None) -> int:
    """Length of the shortest cycle of Gamma(G, A), backtracking excluded.

    A must be symmetric and must not contain e.  A step g -> a g followed by
    a^-1 is backtracking, so an involution (a = a^-1) gives a 2-cycle only when
    ``count_involution_2cycles`` is set.  Breadth-first from e: an edge inside
    level d closes a (2d+1)-cycle, two edges from level d into the same vertex
    close a (2d+2)-cycle; by vertex transitivity the first one found is the girth.
    """
    G = A.group
    if not is_symmetric(A):
        raise NotSymmetric("girth needs A = A^-1")
    if bool(A.contains_index(G.e)):
        raise ValueError("A must not contain e")
    if count_involution_2cycles and np.any(G.inv(A.idx) == A.idx):
        return 2
    perms = left_perms(A)
    dist = np.full(G.order, -1, dtype=np.int64)
    start = G.rank(np.array([G.e]))
    dist[start] = 0
    frontier = start
    d = 0
    reached = 1
    while frontier.size:
        if max_radius is not None and d > max_radius:
            raise BudgetExceeded(f"no cycle within radius {max_radius}")
        nbrs = perms[:, frontier].ravel()
        if np.any(dist[nbrs] == d):
            return 2 * d + 1
        new = nbrs[dist[nbrs] < 0]
        uniq, counts = np.unique(new, return_counts=True)
        if np.any(counts > 1):
            return 2 * d + 2
        d += 1
        dist[uniq] = d
        reached += uniq.size
        frontier = uniq
    if reached != G.order:
        raise NotGenerating(reached, G.order)
    raise AssertionError("finite connected Cayley graph without a cycle")


def expansion_check(A: GroupSet, S: GroupSet) -> Fraction:
    """|S u AS| / |S| for |S| <= |G|/2."""
    from .growth import product
    if 2 * len(S) > S.group.order:
        raise TooLarge("|S| must be at most |G|/2")
    if len(S) == 0:
        raise ValueError("S must be nonempty")
    return Fraction(len(S | product(A, S)), len(S))


# -- adjacency operator ------------------------------------------------------------------


class AdjacencyOperator:
    """f -> (1/|A|) sum_a f(a .) as repeated gathers over left permutations."""

    def __init__(self, A: GroupSet):
        if len(A) == 0:
            raise ValueError("A must be nonempty")
        self.A = A
        self.n = A.group.order
        self.perms = left_perms(A)

    def __call__(self, f: np.ndarray) -> np.ndarray:
        return self.matvec(f)

    def matvec(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f)
        if f.shape[0] != self.n:
            raise DimensionMismatch(f"vector of length {f.shape[0]}, group of order {self.n}")
        out = f[self.perms[0]].copy()
        for perm in self.perms[1:]:
            out += f[perm]
        if out.dtype == object:
            return out * Fraction(1, len(self.perms))
        return out / len(self.perms)

    def dense(self) -> np.ndarray:
        M = np.zeros((self.n, self.n))
        rows = np.arange(self.n)
        w = 1.0 / len(self.perms)
        for perm in self.perms:
            np.add.at(M, (rows, perm), w)
        return M


def matvec(f: np.ndarray, A: GroupSet) -> np.ndarray:
    return AdjacencyOperator(A).matvec(f)


# -- spectra ---------------------------------------------------------------------------------


@dataclass
class SpectralReport:
    eigenvalues: np.ndarray        # descending
    clusters: list                 # (value, multiplicity), descending
    cluster_ids: np.ndarray
    trace_sum: float               # sum of nu_j^2
    trace_target: float            # |G| / |A|
    order: int
    gens: int

    @property
    def nu1(self) -> float:
        return float(self.eigenvalues[1]) if self.eigenvalues.size > 1 else 0.0

    @property
    def gap(self) -> float:
        return 1.0 - self.nu1

    @property
    def trace_residual(self) -> float:
        return abs(self.trace_sum - self.trace_target) / self.trace_target

    def rows(self):
        return [(j, float(v), int(c)) for j, (v, c) in enumerate(zip(self.eigenvalues, self.cluster_ids))]


def cluster_eigenvalues(values: np.ndarray, tol: float = CLUSTER_TOL):
    """Group sorted (descending) values where consecutive gaps are <= tol."""
    ids = np.zeros(values.size, dtype=np.int64)
    if values.size:
        ids[1:] = np.cumsum(np.abs(np.diff(values)) > tol)
    clusters = []
    for c in range(int(ids[-1]) + 1 if values.size else 0):
        members = values[ids == c]
        clusters.append((float(members.mean()), int(members.size)))
    return clusters, ids


def dense_spectrum(A: GroupSet, cap: int | None = None) -> SpectralReport:
    """Full spectrum of the adjacency operator for symmetric A (dense eigensolver)."""
    cap = dense_cap() if cap is None else cap
    G = A.group
    if G.order > cap:
        raise CapExceeded(G.order, cap, what="dense spectrum")
    if not is_symmetric(A):
        raise NotSymmetric("dense spectrum needs A = A^-1")
    M = AdjacencyOperator(A).dense()
    vals = np.linalg.eigvalsh(M)[::-1]
    clusters, ids = cluster_eigenvalues(vals)
    return SpectralReport(vals, clusters, ids, float(np.sum(vals ** 2)),
                          G.order / len(A), G.order, len(A))


def verify_multiplicity(report: SpectralReport, F: FieldParams) -> bool:
    """Every eigenvalue other than nu_0 = 1 occurs with multiplicity >= (q-1)/2.

    The cluster containing 1 counts without the constant eigenvector.
    """
    need = (F.q - 1) / 2
    for value, mult in report.clusters:
        if abs(value - 1.0) <= CLUSTER_TOL:
            if mult > 1 and mult - 1 < need:
                return False
        elif mult < need:
            return False
    return True


def eig_bound(order: int, gens: int, q: int) -> float:
    return math.sqrt((order / gens) / ((q - 1) / 2))


def verify_eig_bound(report: SpectralReport, A: GroupSet, tol: float = 1e-9) -> bool:
    """|nu_j| <= sqrt((|G|/|A|) / ((q-1)/2)) for all j >= 1."""
    bound = eig_bound(report.order, len(A), A.field.q)
    return bool(np.all(np.abs(report.eigenvalues[1:]) <= bound + tol))


@dataclass
class LanczosResult:
    nu1: float
    residual: float
    iterations: int
    restarts: int


def lanczos_nu1(A: GroupSet, tol: float = 1e-8, krylov_dim: int = 60, max_restarts: int = 200,
                seed: int = 0) -> LanczosResult:
    """Top eigenvalue of the adjacency operator on mean-zero functions.

    Explicitly restarted Lanczos with full reorthogonalisation.  The constant
    vector is projected out at every step, which leaves exactly nu_1 on top.
    Stops when the Ritz pair has ||A x - theta x|| <= tol; for a symmetric
    operator that puts an eigenvalue within tol of theta.
    """
    if not is_symmetric(A):
        raise NotSymmetric("spectral estimate needs A = A^-1")
    op = AdjacencyOperator(A)
    n = op.n
    m = max(2, min(krylov_dim, n - 1))
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v -= v.mean()
    v /= np.linalg.norm(v)
    iters = 0
    residual = math.inf
    for restart in range(max_restarts):
        V = np.empty((m + 1, n))
        alpha = np.zeros(m)
        beta = np.zeros(m)
        V[0] = v
        k = m
        for j in range(m):
            w = op.matvec(V[j])
            iters += 1
            w -= w.mean()
            alpha[j] = V[j] @ w
            w -= V[: j + 1].T @ (V[: j + 1] @ w)
            w -= V[: j + 1].T @ (V[: j + 1] @ w)
            beta[j] = np.linalg.norm(w)
            if beta[j] < 1e-12:
                k = j + 1
                break
            V[j + 1] = w / beta[j]
        T = np.diag(alpha[:k]) + np.diag(beta[: k - 1], 1) + np.diag(beta[: k - 1], -1)
        theta, Y = np.linalg.eigh(T)
        y = Y[:, -1]
        x = V[:k].T @ y
        x -= x.mean()
        x /= np.linalg.norm(x)
        ax = op.matvec(x)
        iters += 1
        th = float(x @ ax)
        residual = float(np.linalg.norm(ax - th * x))
        if residual <= tol:
            return LanczosResult(th, residual, iters, restart)
        v = x
    raise NoConvergence(iters, residual)


def lambda2_sparse(A: GroupSet, tol: float = 1e-8, seed: int = 0) -> float:
    """Iterative estimate of nu_1 (see :func:`lanczos_nu1`)."""
    return lanczos_nu1(A, tol=tol, seed=seed).nu1


# -- random walks -----------------------------------------------------------------------------


@dataclass
class MixingProfile:
    norms: list                 # |mu^(l)|_2 for l = 1..L
    sq_norms: list              # |mu^(l)|_2^2 (Fractions in exact mode)
    ratios: dict                # l -> log|mu^(2l)|_2 / log|mu^(l)|_2, for 2l <= L
    identity_residual: float | None   # max |mu^(2l)(e) - |mu^(l)|_2^2| (symmetric A)
    exact: bool
    order: int

    def rows(self):
        return [(l + 1, float(nrm), self.ratios.get(l + 1)) for l, nrm in enumerate(self.norms)]

    def steps_to(self, threshold: float) -> int | None:
        """Least l with |mu^(l)|_2^2 <= threshold."""
        for l, s in enumerate(self.sq_norms, start=1):
            if s <= threshold:
                return l
        return None


MIXING_BUDGET = 10 ** 10
EXACT_BUDGET = 10 ** 4


def mixing_profile(A: GroupSet, L: int, exact: bool = False,
                   budget: int = MIXING_BUDGET) -> MixingProfile:
    """l2 norms of the convolution powers of the uniform measure on A.

    mu^(l) is the law of a_l ... a_1 with independent uniform letters, pushed
    forward one left multiplication at a time.  Exact mode carries integer word
    counts over the common denominator |A|^l.
    """
    G = A.group
    if len(A) == 0:
        raise ValueError("A must be nonempty")
    if L < 1:
        raise ValueError("L >= 1")
    if exact and L * len(A) > EXACT_BUDGET:
        raise BudgetExceeded(f"exact mode needs L*|A| <= {EXACT_BUDGET}")
    if L * len(A) * G.order > budget:
        raise BudgetExceeded(f"L*|A|*|G| = {L * len(A) * G.order} exceeds {budget}")
    # new(x) = sum_a old(a^-1 x): gather through the permutations of A^-1
    back = np.stack([G.left_perm(a) for a in G.inv(A.idx)])
    e_rank = int(G.rank(np.array([G.e]))[0])
    m = len(A)
    if exact:
        cur = np.zeros(G.order, dtype=object)
        cur[:] = 0
    else:
        cur = np.zeros(G.order)
    cur[e_rank] = 1
    dists = []
    for l in range(1, L + 1):
        nxt = cur[back[0]].copy()
        for perm in back[1:]:
            nxt += cur[perm]
        cur = nxt if exact else nxt / m
        dists.append(cur)
    sq, at_e = [], []
    for l, mu in enumerate(dists, start=1):
        if exact:
            den = m ** l
            sq.append(Fraction(int(np.dot(mu, mu)), den * den))
            at_e.append(Fraction(int(mu[e_rank]), den))
        else:
            sq.append(float(mu @ mu))
            at_e.append(float(mu[e_rank]))
    norms = [math.sqrt(s) for s in sq]
    ratios = {}
    for l in range(1, L // 2 + 1):
        a, b = norms[2 * l - 1], norms[l - 1]
        ratios[l] = math.log(a) / math.log(b) if b < 1 else None
    resid = None
    if is_symmetric(A):
        resid = max((abs(at_e[2 * l - 1] - sq[l - 1]) for l in range(1, L // 2 + 1)), default=0.0)
        resid = float(resid)
    return MixingProfile(norms, sq, ratios, resid, exact, G.order)
