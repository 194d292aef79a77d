"""Exact arithmetic in F_p and F_{p^2}.

Every element has a dense integer encoding ``enc`` in ``[0, q)``: for a prime
field it is the residue itself, for F_{p^2} = F_p[x]/(x^2 + m1*x + m0) it is
``c0 + p*c1`` for the element ``c0 + c1*x``.  The encoding fixes the element
enumeration used by the group's canonical index.

Scalar work goes through :class:`FqElem`; bulk work goes through the
``v*`` methods of :class:`FieldParams`, which act on numpy arrays of encodings.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Union

import numpy as np

from .errors import DivisionByZero, FieldCapExceeded, NotPrime, UnsupportedDegree

Q_CAP = 2 ** 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldParams:
    p: int
    alpha: int = 1
    # (m1, m0) for the modulus x^2 + m1*x + m0; None for prime fields
    modulus_poly: tuple[int, int] | None = None
    q: int = dc_field(init=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(self.p)
        if self.alpha not in (1, 2):
            raise UnsupportedDegree(self.alpha)
        if (self.alpha == 2) != (self.modulus_poly is not None):
            raise ValueError("modulus_poly must be given iff alpha == 2")
        if self.alpha == 2:
            m1, m0 = self.modulus_poly
            p = self.p
            if any((x * x + m1 * x + m0) % p == 0 for x in range(p)):
                raise ValueError(f"x^2 + {m1}x + {m0} has a root mod {p}")
        object.__setattr__(self, "q", self.p ** self.alpha)
        if self.q > Q_CAP:
            raise FieldCapExceeded(self.q, Q_CAP)

    def __repr__(self):
        if self.alpha == 1:
            return f"F_{self.p}"
        m1, m0 = self.modulus_poly
        return f"F_{self.q}[x^2+{m1}x+{m0}]"

    # -- scalar interface -------------------------------------------------

    def elem(self, value: Union[int, tuple[int, int], "FqElem"]) -> "FqElem":
        """Coerce an int (prime-subfield element) or (c0, c1) pair."""
        if isinstance(value, FqElem):
            if value.field != self:
                raise ValueError("element belongs to another field")
            return value
        p = self.p
        if isinstance(value, (tuple, list)):
            c0, c1 = value
            if self.alpha == 1:
                if c1 % p:
                    raise ValueError("prime field element has no x-coefficient")
                return FqElem(self, int(c0) % p)
            return FqElem(self, (int(c0) % p) + p * (int(c1) % p))
        return FqElem(self, int(value) % p)

    def from_enc(self, enc: int) -> "FqElem":
        if not 0 <= enc < self.q:
            raise ValueError(f"encoding {enc} out of range for {self}")
        return FqElem(self, int(enc))

    @property
    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    @property
    def one(self) -> "FqElem":
        return FqElem(self, 1)

    def elements(self):
        return [FqElem(self, e) for e in range(self.q)]

    # -- vectorised interface on encodings ----------------------------------

    def _split(self, x):
        return x % self.p, x // self.p

    def vadd(self, x, y):
        if self.alpha == 1:
            return (x + y) % self.p
        x0, x1 = self._split(x)
        y0, y1 = self._split(y)
        return (x0 + y0) % self.p + self.p * ((x1 + y1) % self.p)

    def vneg(self, x):
        if self.alpha == 1:
            return (-x) % self.p
        x0, x1 = self._split(x)
        return (-x0) % self.p + self.p * ((-x1) % self.p)

    def vsub(self, x, y):
        return self.vadd(x, self.vneg(y))

    def vmul(self, x, y):
        p = self.p
        if self.alpha == 1:
            return (x * y) % p
        m1, m0 = self.modulus_poly
        x0, x1 = self._split(x)
        y0, y1 = self._split(y)
        hi = x1 * y1 % p
        c0 = (x0 * y0 - m0 * hi) % p
        c1 = (x0 * y1 + x1 * y0 - m1 * hi) % p
        return c0 + p * c1

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[e] = enc(1/e); entry 0 is unused and set to 0."""
        table = np.zeros(self.q, dtype=np.int64)
        if self.alpha == 1:
            for e in range(1, self.q):
                table[e] = pow(e, self.p - 2, self.p)
            return table
        # x^(q-2) for every nonzero x, batched square-and-multiply
        base = np.arange(self.q, dtype=np.int64)
        acc = np.ones(self.q, dtype=np.int64)
        n = self.q - 2
        while n:
            if n & 1:
                acc = self.vmul(acc, base)
            base = self.vmul(base, base)
            n >>= 1
        acc[0] = 0
        return acc

    def vinv(self, x):
        x = np.asarray(x)
        if np.any(x == 0):
            raise DivisionByZero("inverse of 0")
        return self.inv_table[x]

    @cached_property
    def square_table(self) -> np.ndarray:
        """Boolean table: is_square[e] for nonzero e."""
        sq = np.zeros(self.q, dtype=bool)
        e = np.arange(1, self.q, dtype=np.int64)
        sq[self.vmul(e, e)] = True
        return sq

    # -- scalar ops (field_arith) ------------------------------------------

    def arith(self, a: "FqElem", b: "FqElem | int | None", op: str) -> "FqElem":
        a = self.elem(a)
        if op == "inv":
            return a.inverse()
        if op == "pow":
            return a ** int(b)
        b = self.elem(b)
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if op == "div":
            return a / b
        raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class FqElem:
    field: FieldParams
    enc: int

    @property
    def residue(self) -> Union[int, tuple[int, int]]:
        """Canonical residue: an int for F_p, a (c0, c1) pair for F_{p^2}."""
        if self.field.alpha == 1:
            return self.enc
        return (self.enc % self.field.p, self.enc // self.field.p)

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, (int, np.integer, tuple)):
            return self.field.elem(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FqElem(self.field, int(self.field.vadd(self.enc, other.enc)))

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, int(self.field.vneg(self.enc)))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FqElem(self.field, int(self.field.vmul(self.enc, other.enc)))

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        if self.enc == 0:
            raise DivisionByZero(f"0 has no inverse in {self.field}")
        return FqElem(self.field, int(self.field.inv_table[self.enc]))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n: int) -> "FqElem":
        if n < 0:
            return self.inverse() ** (-n)
        acc, base = self.field.one, self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def is_zero(self) -> bool:
        return self.enc == 0

    def __repr__(self):
        return f"{self.residue}"


def _find_modulus(p: int) -> tuple[int, int]:
    # monic x^2 + m1 x + m0, first irreducible in lexicographic (m1, m0) order
    for m1 in range(p):
        for m0 in range(p):
            if all((x * x + m1 * x + m0) % p for x in range(p)):
                return (m1, m0)
    raise AssertionError(f"no irreducible quadratic mod {p}")


def make_field(p: int, alpha: int = 1) -> FieldParams:
    """Build F_{p^alpha} for alpha in {1, 2}.

    The quadratic modulus for alpha=2 is the first monic irreducible
    x^2 + m1*x + m0 in lexicographic (m1, m0) order, so encodings are stable.
    """
    if not is_prime(p):
        raise NotPrime(p)
    if alpha not in (1, 2):
        raise UnsupportedDegree(alpha)
    if alpha == 1:
        return FieldParams(p, 1)
    return FieldParams(p, 2, _find_modulus(p))


def quad_class(t: FqElem) -> str:
    """'zero', 'square' or 'nonsquare'.  In characteristic 2 every element is a square."""
    if t.enc == 0:
        return "zero"
    return "square" if t.field.square_table[t.enc] else "nonsquare"
