"""Exact integer primitives: factorization, modular inverses, Jacobi symbols and
the classical multiplicative functions.

Everything here works on Python ints, so intermediate products never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

PRIME_TABLE_LIMIT = 10**6


@lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.flatnonzero(flags)


def primes_up_to(n: int) -> list[int]:
    """All primes p <= n, in increasing order."""
    if n < 2:
        return []
    if n <= PRIME_TABLE_LIMIT:
        table = _sieve(PRIME_TABLE_LIMIT)
        k = int(np.searchsorted(table, n, side="right"))
        return table[:k].tolist()
    return _sieve(n).tolist()


def primes_between(lo: float, hi: float) -> list[int]:
    """Primes p with lo < p < hi (open interval)."""
    top = math.ceil(hi) - 1
    return [p for p in primes_up_to(top) if lo < p < hi]


@lru_cache(maxsize=1)
def _small_primes() -> list[int]:
    return primes_up_to(PRIME_TABLE_LIMIT)


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not reduced modulo {self.modulus}")

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, Residue):
            return (self.value, self.modulus) == (other.value, other.modulus)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))


def factorize(n: int) -> FactoredInteger:
    """Deterministic trial division, first over the prime table and then over
    odd candidates if a large cofactor remains."""
    n = int(n)
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    m = n
    out = []
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    else:
        f = _small_primes()[-1] + 2
        while f * f <= m:
            if m % f == 0:
                e = 0
                while m % f == 0:
                    m //= f
                    e += 1
                out.append((f, e))
            f += 2
    if m > 1:
        out.append((m, 1))
    return FactoredInteger(n, tuple(out))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n <= PRIME_TABLE_LIMIT:
        table = _sieve(PRIME_TABLE_LIMIT)
        k = int(np.searchsorted(table, n))
        return k < len(table) and int(table[k]) == n
    f = factorize(n)
    return f.factors == ((n, 1),)


def mod_inverse(a: int, q: int) -> Residue:
    if q < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(a, q) != 1:
        raise ValueError(f"{a} not invertible modulo {q}")
    if q == 1:
        return Residue(0, 1)
    return Residue(pow(a, -1, q), q)


def inv(a: int, q: int) -> int:
    """Plain-int modular inverse (hot paths skip the Residue wrapper)."""
    return pow(a, -1, q) if q > 1 else 0


def jacobi_symbol(a: int, q: int) -> int:
    if q < 1 or q % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {q}")
    a %= q
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if q % 8 in (3, 5):
                result = -result
        a, q = q, a
        if a % 4 == 3 and q % 4 == 3:
            result = -result
        a %= q
    return result if q == 1 else 0


def xi_p(N: int, p: int) -> int:
    """Exponent of the exact power of p dividing N."""
    if N == 0:
        raise ValueError("xi_p undefined for N = 0")
    e = 0
    while N % p == 0:
        N //= p
        e += 1
    return e


def _as_factored(n) -> FactoredInteger:
    return n if isinstance(n, FactoredInteger) else factorize(n)


def mobius(n) -> int:
    f = _as_factored(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def euler_phi(n) -> int:
    f = _as_factored(n)
    out = 1
    for p, e in f.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def num_divisors(n) -> int:
    f = _as_factored(n)
    return math.prod(e + 1 for _, e in f.factors)


def divisor_sum(n) -> int:
    f = _as_factored(n)
    return math.prod((p ** (e + 1) - 1) // (p - 1) for p, e in f.factors)


def is_squarefree(n) -> bool:
    return all(e == 1 for _, e in _as_factored(n).factors)


def divisors(n) -> list[int]:
    f = _as_factored(n)
    out = [1]
    for p, e in f.factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


class MultiplicativeSuite(NamedTuple):
    mu: int
    phi: int
    tau: int
    sigma: int
    squarefree: bool


def multiplicative_suite(n: int) -> MultiplicativeSuite:
    f = factorize(n)
    return MultiplicativeSuite(mobius(f), euler_phi(f), num_divisors(f), divisor_sum(f), is_squarefree(f))


@lru_cache(maxsize=256)
def legendre_table(p: int) -> np.ndarray:
    """chi[x] = (x/p) for x in range(p), as int8."""
    chi = -np.ones(p, dtype=np.int8)
    chi[0] = 0
    x = np.arange(1, p, dtype=np.int64)
    chi[(x * x) % p] = 1
    return chi


@lru_cache(maxsize=64)
def reduced_residues(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced residues mod q and their inverses, as int64 arrays."""
    if q == 1:
        return np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64)
    xs = [x for x in range(1, q) if math.gcd(x, q) == 1]
    invs = [pow(x, -1, q) for x in xs]
    return np.array(xs, dtype=np.int64), np.array(invs, dtype=np.int64)


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo an odd prime p."""
    if p == 2:
        return 1
    qs = factorize(p - 1).primes
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ValueError(f"{p} is not prime")
