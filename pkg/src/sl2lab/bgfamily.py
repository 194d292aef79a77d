"""Integer generators in SL2(Z) and their reductions over a family of primes.

Words are over the alphabet A0 u A0^-1; a word is reduced when no letter is
immediately followed by its inverse.  If every reduced word of length <= L has
all integer entries of absolute value <= p - 2, none of them is congruent to
the identity mod p unless it is the identity in SL2(Z); this gives the free
depth L*, a lower bound L* + 1 for the girth of the Cayley graph mod p when
the integer group is free.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

from .cayley import bfs, dense_cap, dense_spectrum, girth, lanczos_nu1, mixing_profile
from .errors import BudgetExceeded, NotPrime
from .field import is_prime, make_field
from .group import GroupSet, Sl2Elem, generates
from .growth import inverse_set


@dataclass(frozen=True)
class IntMat2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"det != 1 for {self.rows()}")

    @classmethod
    def from_rows(cls, rows) -> "IntMat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __mul__(self, o: "IntMat2") -> "IntMat2":
        return IntMat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                       self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inv(self) -> "IntMat2":
        return IntMat2(self.d, -self.b, -self.c, self.a)

    def max_abs(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def mod(self, p: int) -> tuple:
        return (self.a % p, self.b % p, self.c % p, self.d % p)


PRESETS = {
    "unipotent": (IntMat2(1, 1, 0, 1), IntMat2(1, 0, 1, 1)),
    "triple3": (IntMat2(1, 3, 0, 1), IntMat2(1, 0, 3, 1)),
}


def load_generators(text: str) -> tuple:
    """Parse {"generators": [[[a, b], [c, d]], ...]}."""
    data = json.loads(text)
    return tuple(IntMat2.from_rows(m) for m in data["generators"])


def alphabet(A0: Iterable[IntMat2]) -> list[IntMat2]:
    """A0 followed by the inverses not already present, without duplicates."""
    letters: list[IntMat2] = []
    for g in A0:
        for h in (g, g.inv()):
            if h not in letters:
                letters.append(h)
    return letters


def _inverse_table(letters):
    return [letters.index(g.inv()) for g in letters]


def reduce_mod(A0: Iterable[IntMat2], p: int) -> tuple[GroupSet, bool]:
    """Entrywise reduction mod p and whether the image generates SL2(F_p)."""
    if not is_prime(p):
        raise NotPrime(p)
    F = make_field(p)
    A = GroupSet.of([Sl2Elem.of(F, *g.mod(p)) for g in A0], F)
    return A, generates(A)


def reduced_words(A0: Iterable[IntMat2], length: int):
    """Yield every reduced word (as a tuple of letter indices) of exactly ``length``."""
    letters = alphabet(A0)
    inv = _inverse_table(letters)
    if length == 0:
        yield ()
        return
    stack = [(i,) for i in range(len(letters))]
    while stack:
        w = stack.pop()
        if len(w) == length:
            yield w
            continue
        for j in range(len(letters)):
            if j != inv[w[-1]]:
                stack.append(w + (j,))


def _level_products(A0, max_len, bound=None):
    """Integer products level by level: list of lists of (last_letter, matrix).

    Stops early (returns the levels so far and the failing length) once some
    word at a level has an entry above ``bound``.
    """
    letters = alphabet(A0)
    inv = _inverse_table(letters)
    level = [(i, g) for i, g in enumerate(letters)]
    levels = [level]
    for n in range(1, max_len + 1):
        if n > 1:
            level = [(j, m * letters[j]) for i, m in levels[-1]
                     for j in range(len(letters)) if j != inv[i]]
            levels.append(level)
        if bound is not None and any(m.max_abs() > bound for _, m in level):
            return levels, n
    return levels, None


def free_depth(A0: Iterable[IntMat2], p: int, max_len: int = 64) -> int:
    """Largest L such that all reduced words of length <= L have entries <= p - 2 in absolute value."""
    A0 = tuple(A0)
    _, fail = _level_products(A0, max_len, bound=p - 2)
    if fail is None:
        raise BudgetExceeded(f"entries stay below p-2 up to length {max_len}")
    return fail - 1


def free_ball_size(m: int, ell: int) -> int:
    """Reduced words of length <= ell in a free group on m generators."""
    if ell == 0:
        return 1
    return 1 + sum(2 * m * (2 * m - 1) ** (k - 1) for k in range(1, ell + 1))


def word_injectivity_check(A0: Iterable[IntMat2], p: int, ell: int) -> int:
    """Number of distinct residues mod p among reduced words of length <= ell."""
    A0 = tuple(A0)
    seen = {IntMat2(1, 0, 0, 1).mod(p)}
    if ell == 0:
        return 1
    levels, _ = _level_products(A0, ell)
    for level in levels:
        seen.update(m.mod(p) for _, m in level)
    return len(seen)


def letter_count(A0: Iterable[IntMat2]) -> int:
    """m such that A0 u A0^-1 has 2m letters (A0 without inverse pairs or involutions)."""
    return len(alphabet(A0)) // 2


# -- family scan --------------------------------------------------------------------------

MIX_THRESHOLD_FACTOR = 2
FAMILY_VERTEX_BUDGET = 2_000_000
FAMILY_MAX_MIX = 400

SKIPPED = "skipped"
NOT_GENERATED = "not-generated"


@dataclass
class FamilyRow:
    p: int
    generated: bool
    nu1: float | str | None = None
    gap: float | str | None = None
    diameter: int | str | None = None
    diam_over_log: float | str | None = None
    girth_lb: int | None = None
    girth_exact: int | str | None = None
    mix_steps: int | str | None = None
    spectral_method: str = ""

    def __post_init__(self):
        if isinstance(self.girth_exact, int) and self.girth_lb is not None:
            if self.girth_exact < self.girth_lb:
                raise AssertionError(f"girth {self.girth_exact} below lower bound {self.girth_lb} at p={self.p}")

    def as_row(self):
        return [self.p, self.generated, self.nu1, self.gap, self.diameter, self.diam_over_log,
                self.girth_lb, self.girth_exact, self.mix_steps]


FAMILY_COLUMNS = ["p", "generated", "nu1", "gap", "diameter", "diam_over_log",
                  "girth_lb", "girth_exact", "mix_steps"]
FAMILY_NOTES = [
    "mix_steps = least l with |mu^(l)|_2^2 <= 2/|G| (threshold is an artifact choice)",
    "walk and spectrum use A0 mod p together with inverses; nu1 dense for |G| <= dense cap, else restarted Lanczos",
    "girth_lb = free_depth + 1 (entry-size bound over reduced integer words)",
]


def family_scan(A0: Iterable[IntMat2], primes: Iterable[int], *, vertex_budget: int = FAMILY_VERTEX_BUDGET,
                cap: int | None = None, tol: float = 1e-7, girth_exact: bool = True,
                max_mix: int = FAMILY_MAX_MIX, seed: int = 0) -> list[FamilyRow]:
    """One row per prime: generation, nu1, diameter, girth bounds, mixing steps."""
    A0 = tuple(A0)
    cap = dense_cap() if cap is None else cap
    rows = []
    for p in primes:
        if not is_prime(p):
            raise NotPrime(p)
        A, gen = reduce_mod(A0, p)
        G = A.group
        row = FamilyRow(p, gen)
        try:
            row.girth_lb = free_depth(A0, p) + 1
        except BudgetExceeded:
            row.girth_lb = None
        if not gen:
            for name in ("nu1", "gap", "diameter", "diam_over_log", "girth_exact", "mix_steps"):
                setattr(row, name, NOT_GENERATED)
            rows.append(row)
            continue
        S = A | inverse_set(A)
        S = S - GroupSet.identity(G)
        if G.order > vertex_budget:
            for name in ("nu1", "gap", "diameter", "diam_over_log", "girth_exact", "mix_steps"):
                setattr(row, name, SKIPPED)
            rows.append(row)
            continue
        if G.order <= cap:
            nu1 = dense_spectrum(S, cap=cap).nu1
            row.spectral_method = "dense"
        else:
            nu1 = lanczos_nu1(S, tol=tol, seed=seed).nu1
            row.spectral_method = "lanczos"
        row.nu1 = nu1
        row.gap = 1.0 - nu1
        balls = bfs(S)
        row.diameter = balls.diameter
        row.diam_over_log = balls.diameter / math.log(G.order)
        row.girth_exact = girth(S) if girth_exact else SKIPPED
        if isinstance(row.girth_exact, int) and row.girth_lb is not None and row.girth_exact < row.girth_lb:
            raise AssertionError(f"girth {row.girth_exact} below lower bound {row.girth_lb} at p={p}")
        row.mix_steps = _mix_steps(S, max_mix)
        rows.append(row)
    return rows


def _mix_steps(S: GroupSet, max_mix: int) -> int | str:
    G = S.group
    thr = MIX_THRESHOLD_FACTOR / G.order
    L = min(max_mix, max(8, int(10 * math.log(G.order))))
    prof = mixing_profile(S, L)
    steps = prof.steps_to(thr)
    return steps if steps is not None else f">{L}"
