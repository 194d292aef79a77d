"""Seeded randomized property suites shared by the CLI and the tests."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .group import SL2, GroupSet, Sl2Elem, centralizer
from .growth import (centralizer_bound, classify_pivot, Collision, inverse_set,
                     pivot_injective_bruteforce, power, product, random_set, random_symmetric_set,
                     verify_orbit_stab, verify_plunnecke_chain, verify_ruzsa)

INEQUALITIES = ("ruzsa", "sym_tripling", "power_tripling", "sym_power",
                "stabilizer_lower", "orbit_product", "centralizer_lower")


@dataclass
class SuiteResult:
    counts: Counter = field(default_factory=Counter)
    violations: list = field(default_factory=list)

    def record(self, ineq, context):
        self.counts[ineq.name] += 1
        if not ineq.holds:
            self.violations.append({"check": ineq.name, **ineq.as_dict(), **context})

    def as_dict(self):
        return {"counts": dict(sorted(self.counts.items())), "violations": len(self.violations)}


def _size(rng, G: SL2, cap: int) -> int:
    # singletons come up often on purpose: they are the tight cases
    hi = min(G.order, cap)
    return int(rng.integers(1, hi + 1)) if rng.random() > 0.15 else 1


def inequality_suite(G: SL2, rng: np.random.Generator, trials: int, max_size: int = 10) -> SuiteResult:
    """``trials`` random instances of every inequality in INEQUALITIES over G."""
    res = SuiteResult()
    for t in range(trials):
        ctx = {"q": G.q, "trial": t}
        A = random_set(G, _size(rng, G, max_size), rng)
        B = random_set(G, _size(rng, G, max_size), rng)
        C = random_set(G, _size(rng, G, max_size), rng)
        res.record(verify_ruzsa(A, B, C), ctx)

        k = int(rng.integers(3, 5))
        rep = verify_plunnecke_chain(A, k)
        res.record(rep.sym_tripling, ctx)
        res.record(rep.sym_power, ctx)
        S = random_symmetric_set(G, _size(rng, G, max_size), rng)
        res.record(verify_plunnecke_chain(S, k, require_symmetric=True).power_tripling, ctx)

        x = G.element(int(G.idx[rng.integers(G.order)]))
        if rng.random() < 0.5:
            rep = verify_orbit_stab(A, B, x, "conjugation")
        else:
            h = G.element(int(G.idx[rng.integers(G.order)]))
            rep = verify_orbit_stab(A, B, x, "left-coset", H=centralizer(h))
        res.record(rep.stabilizer_lower, ctx)
        res.record(rep.orbit_product, ctx)

        l = int(rng.integers(1, 3))
        Al = power(A, l)
        g = G.element(int(Al.idx[rng.integers(len(Al))]))
        res.record(centralizer_bound(A, g, l), ctx)
    return res


@dataclass
class PivotSuiteResult:
    instances: int = 0
    pivots: int = 0
    collisions: int = 0
    disagreements: list = field(default_factory=list)
    bad_witnesses: list = field(default_factory=list)

    def as_dict(self):
        return {"instances": self.instances, "pivots": self.pivots, "collisions": self.collisions,
                "disagreements": len(self.disagreements), "bad_witnesses": len(self.bad_witnesses)}


def random_rss(G: SL2, rng: np.random.Generator) -> Sl2Elem:
    pool = G.idx[G.rss_mask]
    return G.element(int(pool[rng.integers(pool.size)]))


def pivot_suite(G: SL2, rng: np.random.Generator, instances: int, max_size: int = 8) -> PivotSuiteResult:
    """classify_pivot against the literal injectivity test, plus witness re-checks."""
    res = PivotSuiteResult()
    centre = GroupSet(G, [G.e, G.minus_e])
    for i in range(instances):
        A = random_set(G, int(rng.integers(1, max_size + 1)), rng)
        xi = G.element(int(G.idx[rng.integers(G.order)]))
        g = random_rss(G, rng)
        verdict = classify_pivot(A, xi, g)
        brute = pivot_injective_bruteforce(A, xi, g)
        res.instances += 1
        if isinstance(verdict, Collision):
            res.collisions += 1
            w = verdict.witness
            torus = centralizer(g).map(lambda t: G.conj(np.int64(xi.index), t))
            ok = (w in product(inverse_set(A), A)) and (w in torus) and (w not in centre)
            if not ok:
                res.bad_witnesses.append({"trial": i, "witness": w.rows()})
        else:
            res.pivots += 1
        if brute != (not isinstance(verdict, Collision)):
            res.disagreements.append({"trial": i, "brute_injective": brute})
    return res

