"""Regenerate tests/golden.json from the brute-force oracles.

    python tests/make_golden.py

Nothing here imports sl2lab; the library is compared against this file.
"""

import json
from pathlib import Path

import numpy as np

import oracles as O

U, L = (1, 1, 0, 1), (1, 0, 1, 1)
TRIPLE3 = [(1, 3, 0, 1), (1, 0, 3, 1)]
UNIPOTENT = [U, L]
HALF_SET_SEED = 7


def main():
    g = {}
    F2, F3, F4, F5, F7, F9 = (O.OracleField(2), O.OracleField(3), O.OracleField(2, 2), O.OracleField(5),
                              O.OracleField(7), O.OracleField(3, 2))
    groups = {}
    for name, F in (("2", F2), ("3", F3), ("4", F4), ("5", F5), ("7", F7), ("9", F9)):
        groups[name] = O.sl2_elements(F)
    g["orders"] = {k: len(v) for k, v in groups.items()}
    g["f9_modulus"] = list(F9.mod)
    g["f4_modulus"] = list(F4.mod)
    g["f5_inv2"] = F5.inv(2)
    g["f9_x_squared"] = F9.mul(3, 3)              # x has encoding 0 + 3*1
    g["squares_mod7"] = sorted(F7.squares())
    g["UL_f5"] = list(O.mmul(F5, U, L))
    g["trace_UL_f5"] = O.trace(F5, O.mmul(F5, U, L))

    G5 = groups["5"]
    g["v5_0"] = O.trace_variety_size(F5, G5, 0)
    g["v5_1"] = O.trace_variety_size(F5, G5, 1)
    g["abcd0_f5"] = sum(1 for a, b, c, d in G5 if F5.mul(F5.mul(a, b), F5.mul(c, d)) == 0)
    g["tori"] = {k: list(O.count_tori(F, groups[k])) for k, F in (("3", F3), ("4", F4), ("5", F5), ("7", F7))}
    g["UL_square_size_f5"] = len(O.set_product(F5, [U, L], [U, L]))
    g["delta_meas_UL_f5"] = O.delta_meas(F5, [U, L])
    g["d3"], _ = O.diameter(F3, UNIPOTENT)
    g["diameters"] = {str(p): O.diameter(O.OracleField(p), UNIPOTENT)[0] for p in (2, 3, 5, 7)}
    g["g5"] = O.girth(F5, UNIPOTENT)
    g["girths"] = {str(p): O.girth(O.OracleField(p), UNIPOTENT) for p in (5, 7, 11)}
    g["triple3_generated"] = {str(p): O.closure_size(O.OracleField(p), TRIPLE3) == p ** 3 - p for p in (2, 3, 5, 7)}
    g["unipotent_generated"] = {str(p): O.closure_size(O.OracleField(p), UNIPOTENT) == p ** 3 - p
                                for p in (2, 3, 5, 7)}
    g["find_rss_k_UL_f5"] = O.min_rss_power(F5, UNIPOTENT)

    g["free_depth"] = {
        "triple3": {str(p): O.free_depth(TRIPLE3, p) for p in (5, 11, 31, 101)},
        "unipotent": {str(p): O.free_depth(UNIPOTENT, p) for p in (5, 11, 31)},
    }
    g["triple3_word_counts_101"] = [O.reduced_word_residues(TRIPLE3, 101, ell) for ell in range(0, 5)]

    # half-size set in SL2(F_7): ranks drawn with numpy's default generator, seed 7
    G7 = groups["7"]
    rng = np.random.default_rng(HALF_SET_SEED)
    ranks = rng.choice(len(G7), size=len(G7) // 2, replace=False)
    S = [G7[int(r)] for r in ranks]
    letters = O.symmetric_letters(F7, UNIPOTENT)
    g["expansion_half_f7"] = {"seed": HALF_SET_SEED, "ratio": str(O.expansion_ratio(F7, letters, S))}

    # torus C(diag(2,3)) in F_5: |A n C(g)| and |A n V_tr(g)| against |A_sym^3|
    D = (2, 0, 0, 3)
    T = O.centralizer(F5, G5, D)
    T3 = O.set_product(F5, O.set_product(F5, T, T), T)
    g["torus_exponents_f5"] = {
        "torus_hits": len(T),
        "variety_hits": sum(1 for x in T if O.trace(F5, x) == O.trace(F5, D)),
        "sym_power_size": len(T3),
    }

    nu1 = {}
    for name, gens in (("unipotent", UNIPOTENT), ("triple3", TRIPLE3)):
        nu1[name] = {}
        for p in (5, 7, 11, 13):
            F = O.OracleField(p)
            nu1[name][str(p)] = O.adjacency_nu1(F, O.sl2_elements(F), gens)
    g["nu1"] = nu1

    out = Path(__file__).with_name("golden.json")
    out.write_text(json.dumps(g, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
