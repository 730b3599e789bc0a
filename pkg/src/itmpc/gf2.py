"""Arithmetic in GF(2^u) with a fixed irreducible modulus per degree.

Elements are ints below ``2**u``; bit ``k`` is the coefficient of ``x**k``.
The modulus for each degree is the trinomial ``x^u + x^k + 1`` with the
smallest ``k``, or failing that the pentanomial ``x^u + x^a + x^b + x^c + 1``
with the lexicographically smallest ``(a, b, c)``.  Degrees up to 64 come from
the table below; larger degrees are found by the same search at runtime.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# degree -> middle exponents of the modulus (the x^u and 1 terms are implied).
IRREDUCIBLE = {
    1: (), 2: (1,), 3: (1,), 4: (1,), 5: (2,), 6: (1,), 7: (1,), 8: (4, 3, 1),
    9: (1,), 10: (3,), 11: (2,), 12: (3,), 13: (4, 3, 1), 14: (5,), 15: (1,),
    16: (5, 3, 1), 17: (3,), 18: (3,), 19: (5, 2, 1), 20: (3,), 21: (2,),
    22: (1,), 23: (5,), 24: (4, 3, 1), 25: (3,), 26: (4, 3, 1), 27: (5, 2, 1),
    28: (1,), 29: (2,), 30: (1,), 31: (3,), 32: (7, 3, 2), 33: (10,), 34: (7,),
    35: (2,), 36: (9,), 37: (6, 4, 1), 38: (6, 5, 1), 39: (4,), 40: (5, 4, 3),
    41: (3,), 42: (7,), 43: (6, 4, 3), 44: (5,), 45: (4, 3, 1), 46: (1,),
    47: (5,), 48: (5, 3, 2), 49: (9,), 50: (4, 3, 2), 51: (6, 3, 1), 52: (3,),
    53: (6, 2, 1), 54: (9,), 55: (7,), 56: (7, 4, 2), 57: (4,), 58: (19,),
    59: (7, 4, 2), 60: (1,), 61: (5, 2, 1), 62: (29,), 63: (1,), 64: (4, 3, 1),
}


def clmul(a: int, b: int) -> int:
    """Carry-less product of two binary polynomials."""
    if a < b:
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def poly_mod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(f: int) -> bool:
    """Ben-Or test: ``f`` has no factor of degree ``<= deg(f) / 2``."""
    u = f.bit_length() - 1
    if u < 1:
        return False
    if u == 1:
        return True
    t = 2  # x
    for _ in range(u // 2):
        t = poly_mod(clmul(t, t), f)
        if _poly_gcd(f, t ^ 2) != 1:
            return False
    return True


def _search(u: int) -> tuple[int, ...]:
    for k in range(1, u):
        if is_irreducible((1 << u) | (1 << k) | 1):
            return (k,)
    for a in range(3, u):
        for b in range(2, a):
            for c in range(1, b):
                if is_irreducible((1 << u) | (1 << a) | (1 << b) | (1 << c) | 1):
                    return (a, b, c)
    raise ValueError(f"no trinomial or pentanomial of degree {u}")


@lru_cache(maxsize=None)
def modulus(u: int) -> int:
    if u < 1:
        raise ValueError("field degree must be positive")
    middle = IRREDUCIBLE[u] if u in IRREDUCIBLE else _search(u)
    f = (1 << u) | 1
    for k in middle:
        f |= 1 << k
    if u == 1:
        f = 0b11  # x + 1
    return f


class GF2k:
    """The field GF(2^u)."""

    def __init__(self, u: int):
        self.u = u
        self.order = 1 << u
        self.poly = modulus(u)

    def mul(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.poly)

    def pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, self.order - 2)

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of uint64 arrays (shift-and-reduce, ``u <= 63``)."""
        if self.u > 63:
            raise ValueError("vectorized multiply supports u <= 63")
        a = np.asarray(a, dtype=np.uint64)
        b = np.asarray(b, dtype=np.uint64)
        acc = np.zeros(np.broadcast(a, b).shape, dtype=np.uint64)
        top = np.uint64(1 << self.u)
        red = np.uint64(self.poly ^ (1 << self.u))
        one = np.uint64(1)
        for k in range(self.u - 1, -1, -1):
            acc <<= one
            over = (acc & top) != 0
            acc &= ~top
            acc[over] ^= red
            bit = ((b >> np.uint64(k)) & one).astype(bool)
            acc ^= np.where(bit, a, np.uint64(0))
        return acc

    def __repr__(self) -> str:
        return f"GF2k({self.u})"
