"""Small finite fields GF(p^k) with table-driven, numpy-vectorized arithmetic.

Elements are integers ``0 <= a < q``: the base-``p`` digits of ``a`` are the
coefficients (constant term first) of a polynomial reduced modulo the field's
modulus.  The integers ``0..p-1`` are therefore the prime subfield.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

__all__ = ["FiniteField", "gf", "is_prime", "is_irreducible", "MAX_P", "MAX_K"]

MAX_P = 31
MAX_K = 4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _polymod(a, m, p):
    """Remainder of ``a`` by monic ``m`` over F_p; lists are low degree first."""
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return a


def is_irreducible(modulus, p: int) -> bool:
    """Trial division by every monic polynomial of degree ``1..k//2``."""
    k = len(modulus) - 1
    if k < 1 or modulus[-1] % p != 1:
        return False
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            rem = _polymod(modulus, list(low) + [1], p)
            if not any(rem):
                return False
    return True


def _mulmod(a, b, m, p):
    k = len(m) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    rem = _polymod(prod, m, p)
    return rem + [0] * (k - len(rem))


class FiniteField:
    """GF(p^k).  ``modulus`` is a monic irreducible of degree ``k`` given by its
    coefficients, constant term first; by default the first primitive one in
    lexicographic order is used."""

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p) or p > MAX_P:
            raise ValueError(f"characteristic must be a prime <= {MAX_P}, got {p}")
        if not 1 <= k <= MAX_K:
            raise ValueError(f"extension degree must be in 1..{MAX_K}, got {k}")
        self.p, self.k, self.q = p, k, p ** k
        if modulus is None:
            modulus = self._find_primitive()
        modulus = [c % p for c in modulus]
        if len(modulus) != k + 1 or not is_irreducible(modulus, p):
            raise ValueError(f"{modulus} is not a monic irreducible of degree {k} over F_{p}")
        self.modulus = tuple(modulus)
        self._build_tables()

    def _find_primitive(self):
        if self.k == 1:
            return [0, 1]
        for low in itertools.product(range(self.p), repeat=self.k):
            m = list(low) + [1]
            if low[0] and is_irreducible(m, self.p) and self._order_of_x(m) == self.q - 1:
                return m
        raise RuntimeError("no primitive polynomial found")  # pragma: no cover

    def _order_of_x(self, m):
        one = [1] + [0] * (self.k - 1)
        x = [0, 1] + [0] * (self.k - 2)
        cur, n = x, 1
        while cur != one:
            cur = _mulmod(cur, x, m, self.p)
            n += 1
        return n

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        self._weights = p ** np.arange(k, dtype=np.int64)
        self.digits = (np.arange(q, dtype=np.int64)[:, None] // self._weights) % p
        m = list(self.modulus)
        # find a generator; x is one whenever the modulus is primitive
        for g in range(1, q):
            gd = [int(c) for c in self.digits[g]]
            exp = np.zeros(q - 1, dtype=np.int64)
            cur = [1] + [0] * (k - 1)
            seen = set()
            ok = True
            for i in range(q - 1):
                val = int(np.dot(cur, self._weights))
                if val in seen:
                    ok = False
                    break
                seen.add(val)
                exp[i] = val
                cur = _mulmod(cur, gd, m, p) if k > 1 else [(cur[0] * gd[0]) % p]
            if ok:
                break
        self.generator = g
        self.exp = np.concatenate([exp, exp])
        self.log = np.full(q, -1, dtype=np.int64)
        self.log[exp] = np.arange(q - 1)

    # -- arithmetic (scalars or arrays) ---------------------------------------

    def _combine(self, digits):
        return (digits % self.p) @ self._weights

    def add(self, a, b):
        if self.k == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        return self._combine(self.digits[a] + self.digits[b])

    def neg(self, a):
        if self.k == 1:
            return (-np.asarray(a)) % self.p
        return self._combine(-self.digits[a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self.k == 1:
            return (a * b) % self.p
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, n: int):
        """``a ** n`` for ``n >= 0`` (with ``0 ** 0 == 1``)."""
        a = np.asarray(a)
        if n == 0:
            return np.ones_like(a)
        out = self.exp[(self.log[a] * n) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def __repr__(self):
        return f"FiniteField(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))


@lru_cache(maxsize=None)
def gf(p: int, k: int = 1) -> FiniteField:
    """Cached GF(p^k) with the default modulus."""
    return FiniteField(p, k)
