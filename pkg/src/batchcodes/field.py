"""Finite field arithmetic GF(p^e) on integer element indices.

An element index encodes a polynomial over GF(p) in base p: index
``c0 + c1*p + c2*p^2 + ...`` stands for ``c0 + c1*x + c2*x^2 + ...``.
Index 0 is the additive identity and index 1 the multiplicative identity.
Extension fields reduce modulo a fixed monic irreducible polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import NotPrimePower

# Monic irreducibles, coefficients low degree first (last entry is the leading 1).
_IRREDUCIBLE: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),  # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (3, 2): (1, 0, 1),  # x^2 + 1
}

# Prime q above this size skip the q*q tables and use modular arithmetic.
TABLE_LIMIT = 256

_MAX_Q = 1 << 20


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise NotPrimePower otherwise."""
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise NotPrimePower(f"{q!r} is not a prime power")
    q = int(q)
    if q > _MAX_Q:
        raise NotPrimePower(f"q={q} exceeds supported range 2..{_MAX_Q}")
    p = next((d for d in range(2, int(q**0.5) + 1) if q % d == 0), q)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise NotPrimePower(f"{q} has more than one prime factor")
    return p, e


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except NotPrimePower:
        return False
    return True


def _poly_mod(a: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    deg = len(mod) - 1
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i] % p
        if c:
            for j in range(deg + 1):
                a[i - deg + j] = (a[i - deg + j] - c * mod[j]) % p
    return [x % p for x in a[:deg]] + [0] * max(0, deg - len(a))


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            if not any(_poly_mod(list(poly), divisor, p)):
                return False
    return True


@lru_cache(maxsize=None)
def irreducible_for(p: int, e: int) -> tuple[int, ...]:
    """The fixed monic irreducible of degree ``e`` over GF(p).

    Uses the hardcoded table where available, otherwise the smallest monic
    irreducible in base-p order (which reproduces every table entry).
    """
    if e == 1:
        return (0, 1)
    if (p, e) in _IRREDUCIBLE:
        return _IRREDUCIBLE[(p, e)]
    for value in range(p**e):
        low = tuple((value // p**i) % p for i in range(e))
        poly = low + (1,)
        if low[0] and _is_irreducible(poly, p):
            return poly
    raise AssertionError(f"no irreducible of degree {e} over GF({p})")


def _digits(x: int, p: int, e: int) -> list[int]:
    return [(x // p**i) % p for i in range(e)]


def _index(coeffs: list[int], p: int) -> int:
    return sum(c * p**i for i, c in enumerate(coeffs))


@dataclass(frozen=True, eq=False)
class FieldTable:
    """GF(q) with precomputed addition and multiplication tables.

    For large prime ``q`` (above ``TABLE_LIMIT``) the tables are omitted and
    arithmetic falls back to integers mod q.
    """

    p: int
    e: int
    irreducible: tuple[int, ...]
    add_table: np.ndarray | None = field(repr=False)
    mul_table: np.ndarray | None = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    def add(self, a: int, b: int) -> int:
        if self.add_table is None:
            return (a + b) % self.p
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        if self.mul_table is None:
            return (a * b) % self.p
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        if self.add_table is None:
            return (-a) % self.p
        return int(np.flatnonzero(self.add_table[a] == 0)[0])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self.mul_table is None:
            return pow(a, -1, self.p)
        return int(np.flatnonzero(self.mul_table[a] == 1)[0])

    def elements(self) -> list[int]:
        return list(range(self.q))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldTable):
            return NotImplemented
        if (self.p, self.e, self.irreducible) != (other.p, other.e, other.irreducible):
            return False
        if self.add_table is None or other.add_table is None:
            return self.add_table is other.add_table
        return bool(
            np.array_equal(self.add_table, other.add_table)
            and np.array_equal(self.mul_table, other.mul_table)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.irreducible))


def field_new(q: int) -> FieldTable:
    """Build GF(q) for a prime power ``q``."""
    p, e = prime_power(q)
    mod = irreducible_for(p, e)
    if e == 1 and q > TABLE_LIMIT:
        return FieldTable(p, e, mod, None, None)

    digits = [_digits(x, p, e) for x in range(q)]
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        da = digits[a]
        for b in range(a, q):
            db = digits[b]
            s = _index([(x + y) % p for x, y in zip(da, db)], p)
            prod = [0] * (2 * e - 1)
            for i, x in enumerate(da):
                if x:
                    for j, y in enumerate(db):
                        prod[i + j] += x * y
            m = _index(_poly_mod(prod, mod, p), p) if e > 1 else (a * b) % p
            add[a, b] = add[b, a] = s
            mul[a, b] = mul[b, a] = m
    add.setflags(write=False)
    mul.setflags(write=False)
    return FieldTable(p, e, mod, add, mul)


def field_elements(f: FieldTable) -> list[int]:
    return f.elements()
