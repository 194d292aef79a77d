"""Command-line front end.

    sl2lab spectrum --p 13 --preset unipotent --out results/
    sl2lab family --preset triple3 --primes 5-101 --out results/
    sl2lab verify-all --seed 7

Every command prints a JSON report {command, config, results, violations}
(or, with --format csv, the command's main table).  Exit status: 0 clean,
1 when an invariant is violated, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bgfamily, cayley, escape as esc, field as fld, group as grp, growth, suite
from .errors import NotPrime, Sl2LabError

COMMANDS = ("growth", "diameter", "spectrum", "mixing", "escape", "pivot", "tori", "family", "verify-all")
VERIFY_QS = (2, 3, 5, 7)
FLOAT_DIGITS = 12


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    alpha: int = 1
    preset: str = "unipotent"
    generators: str | None = None
    kmax: int = 6
    L: int = 40
    dense_cap: int | None = None
    tol: float = 1e-8
    seed: int = 0
    out: str | None = None
    format: str = "json"
    primes: str | None = None
    variety: str | None = None
    trials: int = 50


# -- serialization -----------------------------------------------------------------------


def _clean(x):
    """Plain JSON values; floats rounded so reports do not depend on the last ulp."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{FLOAT_DIGITS}g}")
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, grp.Sl2Elem):
        return _clean(x.rows())
    if isinstance(x, fld.FqElem):
        return _clean(x.residue)
    if x is None or isinstance(x, str):
        return x
    return str(x)


def _csv_text(columns, rows, notes=()) -> str:
    buf = io.StringIO()
    for n in notes:
        buf.write(f"# {n}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["" if v is None else _clean(v) for v in r])
    return buf.getvalue()


# -- inputs ------------------------------------------------------------------------------


def _field(cfg: RunConfig) -> fld.FieldParams:
    if cfg.p is None:
        raise UsageError(f"{cfg.command} needs --p")
    return fld.make_field(cfg.p, cfg.alpha)


def _integer_generators(cfg: RunConfig):
    if cfg.generators:
        return bgfamily.load_generators(Path(cfg.generators).read_text())
    return bgfamily.PRESETS[cfg.preset]


def _generators(cfg: RunConfig, F: fld.FieldParams) -> grp.GroupSet:
    """Integer generators reduced into the prime subfield of F."""
    elems = [grp.Sl2Elem.of(F, *(v % F.p for v in (g.a, g.b, g.c, g.d))) for g in _integer_generators(cfg)]
    return grp.GroupSet.of(elems, F)


def _walk_set(A: grp.GroupSet) -> grp.GroupSet:
    """A together with inverses, identity removed: the graph's edge labels."""
    S = A | growth.inverse_set(A)
    return S - grp.GroupSet.identity(A.group)


def _primes(spec: str | None, top: int | None) -> list[int]:
    if spec is None:
        if top is None:
            raise UsageError("family needs --primes or --p")
        return [n for n in range(2, top + 1) if fld.is_prime(n)]
    out = []
    for part in spec.split(","):
        if "-" in part:
            lo, hi = (int(x) for x in part.split("-"))
            out.extend(n for n in range(lo, hi + 1) if fld.is_prime(n))
        else:
            n = int(part)
            if not fld.is_prime(n):
                raise NotPrime(n)
            out.append(n)
    return out


# -- commands ----------------------------------------------------------------------------


class Run:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.results: dict = {}
        self.violations: list = []
        self.tables: dict = {}      # file name -> csv text
        self.main_table: str | None = None

    def violate(self, check: str, **detail):
        self.violations.append({"check": check, **detail})

    def table(self, name, columns, rows, notes=(), main=False):
        text = _csv_text(columns, rows, notes)
        self.tables[name] = text
        if main:
            self.main_table = name

    def ineq(self, ineq: growth.Inequality, **ctx):
        if not ineq.holds:
            self.violate(ineq.name, **ineq.as_dict(), **ctx)
        return ineq.as_dict()

    # growth ------------------------------------------------------------------
    def growth(self):
        F = _field(self.cfg)
        A = _generators(self.cfg, F)
        rep = growth.trichotomy(A)
        self.results["trichotomy"] = rep.as_dict()
        if not rep.dichotomy_holds:
            self.violate("dichotomy", **rep.as_dict())
        k = max(3, self.cfg.kmax)
        chain = growth.verify_plunnecke_chain(A, k)
        self.results["tripling_chain"] = {
            "k": k, "sizes": chain.sizes,
            "sym_tripling": self.ineq(chain.sym_tripling),
            "sym_power": self.ineq(chain.sym_power),
            "sym_power_small_constant": chain.sym_power_small_constant.as_dict(),
        }
        S = growth.symmetrize(A)
        self.results["power_tripling"] = self.ineq(growth.verify_plunnecke_chain(S, k).power_tripling)
        self.results["ruzsa"] = self.ineq(growth.verify_ruzsa(A, A, A))
        x = A.min_element()
        os_rep = growth.verify_orbit_stab(A, S, x)
        self.results["orbit_stabilizer"] = {"stabilizer_lower": self.ineq(os_rep.stabilizer_lower),
                                            "orbit_product": self.ineq(os_rep.orbit_product)}
        self.results["centralizer_bound"] = self.ineq(growth.centralizer_bound(A, x, 1))
        G = A.group
        if len(S) >= growth.large_set_threshold(G.order):
            ls = growth.large_set_check(S)
            self.results["large_set"] = asdict(ls)
            if ls.applies and not ls.holds:
                self.violate("large_set", **asdict(ls))

    # diameter -----------------------------------------------------------------
    def diameter(self):
        F = _field(self.cfg)
        S = _walk_set(_generators(self.cfg, F))
        balls = cayley.bfs(S)
        g = cayley.girth(S)
        self.results.update({"order": S.group.order, "diameter": balls.diameter,
                             "ball_sizes": balls.ball_sizes, "girth": g,
                             "diam_over_log": balls.diameter / math.log(S.group.order)})
        if balls.ball_sizes[-1] != S.group.order:
            self.violate("ball_covers_group", reached=balls.ball_sizes[-1])
        self.table("balls.csv", ["radius", "ball_size"], balls.rows(), main=True)

    # spectrum -----------------------------------------------------------------
    def spectrum(self):
        F = _field(self.cfg)
        S = _walk_set(_generators(self.cfg, F))
        G = S.group
        grp.require_generating(S)
        cap = self.cfg.dense_cap if self.cfg.dense_cap is not None else cayley.dense_cap()
        res = {"order": G.order, "gens": len(S), "cap": cap}
        if G.order <= cap:
            rep = cayley.dense_spectrum(S, cap=cap)
            mult = cayley.verify_multiplicity(rep, F)
            bound = cayley.verify_eig_bound(rep, S)
            res.update({"method": "dense", "nu1": rep.nu1, "gap": rep.gap,
                        "clusters": [list(c) for c in rep.clusters],
                        "trace_sum": rep.trace_sum, "trace_target": rep.trace_target,
                        "trace_residual": rep.trace_residual,
                        "multiplicity_ok": mult, "eig_bound": cayley.eig_bound(G.order, len(S), F.q),
                        "eig_bound_ok": bound})
            if not mult:
                self.violate("multiplicity", required=(F.q - 1) / 2)
            if not bound:
                self.violate("eig_bound")
            if rep.trace_residual > cayley.TRACE_RTOL:
                self.violate("trace_identity", residual=rep.trace_residual)
            self.table("spectrum.csv", ["j", "nu_j", "cluster_id"], rep.rows(), main=True)
        else:
            lz = cayley.lanczos_nu1(S, tol=self.cfg.tol, seed=self.cfg.seed)
            res.update({"method": "lanczos", "nu1": lz.nu1, "gap": 1.0 - lz.nu1,
                        "residual": lz.residual, "iterations": lz.iterations})
            self.table("spectrum.csv", ["j", "nu_j", "cluster_id"], [(1, lz.nu1, "")], main=True)
        if res["gap"] <= 0:
            self.violate("positive_gap", nu1=res["nu1"])
        self.results.update(res)

    # mixing -------------------------------------------------------------------
    def mixing(self):
        F = _field(self.cfg)
        S = _walk_set(_generators(self.cfg, F))
        grp.require_generating(S)
        prof = cayley.mixing_profile(S, self.cfg.L)
        G = S.group
        thr = bgfamily.MIX_THRESHOLD_FACTOR / G.order
        self.results.update({"order": G.order, "L": self.cfg.L, "final_norm": prof.norms[-1],
                             "uniform_norm": 1 / math.sqrt(G.order),
                             "identity_residual": prof.identity_residual,
                             "threshold": thr, "steps_to_threshold": prof.steps_to(thr)})
        if prof.identity_residual is not None and prof.identity_residual > 1e-12:
            self.violate("return_probability_identity", residual=prof.identity_residual)
        self.table("mixing.csv", ["ell", "l2norm", "ratio"], prof.rows(),
                   notes=["ratio = log|mu^(2l)|_2 / log|mu^(l)|_2, blank when 2l > L"], main=True)

    # escape -------------------------------------------------------------------
    def escape(self):
        F = _field(self.cfg)
        A = _generators(self.cfg, F)
        if self.cfg.variety:
            W = esc.Variety.from_json(F, Path(self.cfg.variety).read_text())
        else:
            W = esc.Variety.trace_square_is_4(F)
        x = grp.Sl2Elem.identity(F)
        r = esc.escape(A, W, x, self.cfg.kmax)
        bad = [g.rows() for g in r.witnesses if esc.member(W, g * x)]
        self.results["escape"] = {"variety": W.to_json(), "k_min": r.k_min,
                                  "witness_count": r.witness_count, "sym_power_size": r.sym_power_size,
                                  "empirical_c": r.empirical_c,
                                  "first_witness": r.witnesses[0] if r.witnesses else None}
        if bad:
            self.violate("escape_witness_on_variety", witnesses=bad[:5])
        if F.q > 3:
            g, k = esc.find_rss(A, self.cfg.kmax)
            self.results["find_rss"] = {"element": g, "k": k, "trace": g.trace()}
            if not grp.is_rss(g):
                self.violate("find_rss_not_rss", element=g)

    # pivot --------------------------------------------------------------------
    def pivot(self):
        F = _field(self.cfg)
        A = _generators(self.cfg, F)
        G = A.group
        if F.q <= 3:
            raise UsageError("pivot needs q > 3 (no regular semisimple torus beyond the centre)")
        g, k = esc.find_rss(A, self.cfg.kmax)
        rng = np.random.default_rng(self.cfg.seed)
        n = min(G.order, max(1, self.cfg.trials))
        xis = G.idx[np.sort(rng.choice(G.order, size=n, replace=False))]
        An = growth.power_sym(A, 2)
        counts = {"pivot": 0, "collision": 0}
        rows = []
        for xi in xis:
            xe = G.element(int(xi))
            v = growth.classify_pivot(An, xe, g)
            brute = growth.pivot_injective_bruteforce(An, xe, g)
            kind = "collision" if isinstance(v, growth.Collision) else "pivot"
            counts[kind] += 1
            if brute != (kind == "pivot"):
                self.violate("pivot_bruteforce_disagreement", xi=xe)
            rows.append((int(xi), kind, _clean(v.witness) if kind == "collision" else ""))
        self.results.update({"torus_generator": g, "set_size": len(An), "xi_tested": n, **counts})
        self.table("pivots.csv", ["xi_index", "verdict", "witness"], rows, main=True)

    # tori ---------------------------------------------------------------------
    def tori(self):
        F = _field(self.cfg)
        tc = grp.count_tori(F)
        q = F.q
        res = {"q": q, "n_split": tc.n_split, "n_nonsplit": tc.n_nonsplit, "pairwise_ok": tc.pairwise_ok}
        if not tc.pairwise_ok:
            self.violate("tori_pairwise_intersection")
        if q > 3 and (tc.n_split, tc.n_nonsplit) != (q * (q + 1) // 2, q * (q - 1) // 2):
            self.violate("tori_count", expected=[q * (q + 1) // 2, q * (q - 1) // 2])
        if q >= 5:
            res["fiber"] = _fiber_scan(F)
            if res["fiber"]["max_fiber"] > 16 or res["fiber"]["max_excluded_s"] > 4:
                self.violate("fiber_bound", **res["fiber"])
        self.results.update(res)

    # family -------------------------------------------------------------------
    def family(self):
        A0 = _integer_generators(self.cfg)
        primes = _primes(self.cfg.primes, self.cfg.p)
        rows = bgfamily.family_scan(A0, primes, cap=self.cfg.dense_cap, tol=max(self.cfg.tol, 1e-7),
                                    seed=self.cfg.seed)
        for r in rows:
            if isinstance(r.gap, float) and r.gap <= 0:
                self.violate("positive_gap", p=r.p, nu1=r.nu1)
        self.results["rows"] = [dict(zip(bgfamily.FAMILY_COLUMNS, r.as_row())) for r in rows]
        self.results["free_depth"] = {r.p: (r.girth_lb - 1 if r.girth_lb is not None else None) for r in rows}
        self.table("family.csv", bgfamily.FAMILY_COLUMNS, [r.as_row() for r in rows],
                   notes=bgfamily.FAMILY_NOTES, main=True)

    # verify-all -----------------------------------------------------------------
    def verify_all(self):
        qs = (self.cfg.p,) if self.cfg.p is not None else VERIFY_QS
        rng = np.random.default_rng(self.cfg.seed)
        for q in qs:
            F = fld.make_field(q, self.cfg.alpha)
            self.results[str(F.q)] = _verify_field(self, F, rng, self.cfg)


def _fiber_scan(F: fld.FieldParams) -> dict:
    G = grp.sl2(F)
    T = growth._diagonal_torus(G)
    a, b, c, d = G.decode(G.idx)
    valid = G.idx[(a != 0) & (b != 0) & (c != 0) & (d != 0)]
    worst, worst_excl = 0, 0
    for gi in valid:
        rep = growth.phi_fiber_check(G.element(int(gi)), T)
        worst = max(worst, rep.max_fiber)
        worst_excl = max(worst_excl, rep.excluded_s)
    return {"g_checked": int(valid.size), "max_fiber": worst, "max_excluded_s": worst_excl}


def _verify_field(run: Run, F: fld.FieldParams, rng: np.random.Generator, cfg: RunConfig) -> dict:
    """Every operation of field/group/growth/cayley/escape on one field."""
    out: dict = {}
    q = F.q
    G = grp.sl2(F)

    def check(name, ok, **detail):
        if not ok:
            run.violate(name, q=q, **detail)
        return bool(ok)

    # field
    els = list(F.elements())
    sq = sum(1 for t in els if fld.quad_class(t) == "square")
    out["field"] = {
        "elements": len(els),
        "squares": sq,
        "arith_ok": check("field_arith", all(
            F.arith(F.arith(x, y, "mul"), y, "div") == x and F.arith(F.arith(x, y, "add"), y, "sub") == x
            for x in els for y in els if not y.is_zero())),
        "inverse_ok": check("field_inverse", all(F.arith(x, None, "inv") * x == F.one for x in els if not x.is_zero())),
        "pow_ok": check("field_pow", all(F.arith(x, q - 1, "pow") == F.one for x in els if not x.is_zero())),
    }
    check("quad_class_count", sq == (q - 1 if q % 2 == 0 else (q - 1) // 2), squares=sq)

    # group
    elems = list(grp.enumerate_group(F))
    out["group"] = {"order": G.order, "order_ok": check("group_order", G.order == q ** 3 - q == len(elems))}
    picks = [G.element(int(i)) for i in G.idx[rng.choice(G.order, size=min(G.order, 20), replace=False)]]
    e = grp.Sl2Elem.identity(F)
    out["group"]["mul_inv_ok"] = check("mul_inv", all(grp.mul(g, grp.inv(g)) == e for g in picks)
                                       and all(grp.mul(grp.mul(g, h), k) == grp.mul(g, grp.mul(h, k))
                                               for g, h, k in zip(picks, picks[1:], picks[2:])))
    out["group"]["trace_conj_ok"] = check("trace_conjugation", all(
        grp.trace(h * g * h.inv()) == grp.trace(g) for g, h in zip(picks, picks[1:])))
    cls_sizes, cent_ok = 0, True
    seen = np.zeros(G.order, dtype=bool)
    for g in elems:
        r = G.rank(np.array([g.index]))[0]
        if seen[r]:
            continue
        cl = grp.conjugacy_class(g)
        seen[cl.ranks()] = True
        cls_sizes += len(cl)
        cent_ok &= len(cl) * len(grp.centralizer(g)) == G.order
    out["group"]["class_equation_ok"] = check("class_equation", cls_sizes == G.order and cent_ok)
    n_rss = int(np.count_nonzero(G.rss_mask))
    out["group"]["rss_count"] = n_rss
    tv_total = sum(len(grp.trace_variety(t)) for t in els)
    out["group"]["trace_varieties_ok"] = check("trace_varieties_partition", tv_total == G.order)
    tc = grp.count_tori(F)
    out["group"]["tori"] = {"n_split": tc.n_split, "n_nonsplit": tc.n_nonsplit, "pairwise_ok": tc.pairwise_ok}
    check("tori_pairwise", tc.pairwise_ok)
    if q > 3:
        check("tori_count", (tc.n_split, tc.n_nonsplit) == (q * (q + 1) // 2, q * (q - 1) // 2))

    # growth
    ineq = suite.inequality_suite(G, rng, cfg.trials)
    out["growth"] = {"inequalities": ineq.as_dict()}
    for v in ineq.violations:
        run.violate(v.pop("check"), **v)
    A = _generators(cfg, F)
    tri = growth.trichotomy(A)
    out["growth"]["trichotomy"] = tri.as_dict()
    check("dichotomy", tri.dichotomy_holds)
    dichotomy_fail = 0
    for _ in range(cfg.trials):
        B = growth.random_generating_set(G, int(rng.integers(2, 5)), rng)
        dichotomy_fail += not growth.trichotomy(B).dichotomy_holds
    out["growth"]["random_dichotomy_failures"] = dichotomy_fail
    check("dichotomy_random", dichotomy_fail == 0)
    big = growth.random_symmetric_set(G, min(G.order, math.ceil(growth.large_set_threshold(G.order))), rng)
    ls = growth.large_set_check(big)
    out["growth"]["large_set"] = asdict(ls)
    check("large_set", not ls.applies or ls.holds)
    if q > 3:
        piv = suite.pivot_suite(G, rng, cfg.trials)
        out["growth"]["pivot"] = piv.as_dict()
        check("pivot_coherence", not piv.disagreements and not piv.bad_witnesses)
        g = suite.random_rss(G, rng)
        te = growth.torus_exponents(growth.symmetrize(A), g, 3)
        out["growth"]["torus_exponents"] = asdict(te)
    if q >= 5:
        out["growth"]["fiber"] = _fiber_scan(F)
        check("fiber_bound", out["growth"]["fiber"]["max_fiber"] <= 16
              and out["growth"]["fiber"]["max_excluded_s"] <= 4)

    # cayley
    S = _walk_set(A)
    balls = cayley.bfs(S)
    f = rng.standard_normal(G.order)
    M = cayley.AdjacencyOperator(S)
    lhs = float(np.dot(M.matvec(f), f))
    sym_ok = abs(lhs - float(np.dot(f, M.matvec(f)))) < 1e-9 and np.allclose(M.matvec(np.ones(G.order)), 1.0)
    rep = cayley.dense_spectrum(S, cap=max(G.order, cayley.dense_cap()))
    lz = cayley.lambda2_sparse(S, tol=1e-10, seed=cfg.seed) if G.order > 2 else rep.nu1
    prof = cayley.mixing_profile(S, min(cfg.L, 20))
    half = _random_half(G, rng)
    ratio = cayley.expansion_check(S, half)
    out["cayley"] = {
        "diameter": balls.diameter,
        "girth": cayley.girth(S),
        "matvec_ok": check("matvec_stochastic", sym_ok),
        "nu1_dense": rep.nu1,
        "nu1_sparse_agrees": check("spectral_consistency", abs(lz - rep.nu1) <= 1e-6, dense=rep.nu1, sparse=lz),
        "trace_residual_ok": check("trace_identity", rep.trace_residual <= cayley.TRACE_RTOL),
        "multiplicity_ok": check("multiplicity", cayley.verify_multiplicity(rep, F)),
        "eig_bound_ok": check("eig_bound", cayley.verify_eig_bound(rep, S)),
        "mixing_identity_ok": check("return_probability_identity", (prof.identity_residual or 0.0) <= 1e-12),
        "expansion_ratio_half_set": ratio,
    }

    # escape
    W = esc.Variety.trace_square_is_4(F)
    out["escape"] = {
        "points_trace_sq_4": esc.point_count(W, F),
        "points_abcd_0": esc.point_count(esc.Variety.abcd(F), F),
        "points_x1_A4": esc.point_count(esc.Variety.coordinate(F, 1), F, "A4"),
    }
    check("point_count_affine", out["escape"]["points_x1_A4"] == q ** 3)
    check("point_count_sl2", out["escape"]["points_trace_sq_4"] == G.order - n_rss)
    check("member", all(esc.member(W, g) == (not grp.is_rss(g)) for g in picks))
    if q > 3:
        r = esc.escape(A, W, e, cfg.kmax)
        out["escape"]["k_min"] = r.k_min
        check("escape_witness", all(not esc.member(W, w) for w in r.witnesses))
        g, k = esc.find_rss(A, cfg.kmax)
        out["escape"]["find_rss"] = {"element": g, "k": k}
        check("find_rss", grp.is_rss(g))
    return out


def _random_half(G: grp.SL2, rng) -> grp.GroupSet:
    pick = rng.choice(G.order, size=G.order // 2, replace=False)
    return grp.GroupSet(G, np.sort(G.idx[pick]), trusted=True)


# -- entry point ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sl2lab", description="Growth, spectra and walks in SL2 over finite fields.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--p", type=int, help="characteristic (prime)")
    ap.add_argument("--alpha", type=int, default=1, choices=(1, 2), help="field degree, q = p^alpha")
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(bgfamily.PRESETS), default="unipotent")
    src.add_argument("--generators", metavar="FILE", help='JSON {"generators": [[[a,b],[c,d]], ...]}')
    ap.add_argument("--kmax", type=int, default=6)
    ap.add_argument("--L", type=int, default=40, help="random-walk steps")
    ap.add_argument("--dense-cap", type=int, default=None,
                    help=f"largest |G| for the dense eigensolver (env {cayley.DENSE_CAP_ENV})")
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", metavar="DIR", help="write report.json and CSV tables here")
    ap.add_argument("--format", choices=("csv", "json"), default="json")
    ap.add_argument("--primes", help="family primes, e.g. 5-101 or 5,7,11")
    ap.add_argument("--variety", metavar="FILE", help="variety JSON for escape")
    ap.add_argument("--trials", type=int, default=50, help="random instances per check")
    return ap


def run(cfg: RunConfig) -> tuple[int, dict, Run]:
    r = Run(cfg)
    getattr(r, cfg.command.replace("-", "_"))()
    report = _clean({"command": cfg.command, "config": asdict(cfg), "results": r.results,
                     "violations": r.violations})
    return (1 if r.violations else 0), report, r


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items()})
    if cfg.dense_cap is not None:
        os.environ[cayley.DENSE_CAP_ENV] = str(cfg.dense_cap)
    try:
        code, report, r = run(cfg)
    except (UsageError, Sl2LabError, ValueError, OSError) as exc:
        print(f"sl2lab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text)
        for name, body in r.tables.items():
            (out / name).write_text(body)
    if cfg.format == "csv" and r.main_table:
        sys.stdout.write(r.tables[r.main_table])
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
