"""Complete exponential sums: Gauss, Kloosterman, Ramanujan, quadratic-character
sums of polynomials, and the composite sum V_q built from Gauss sums.

Every sum has a literal O(q) (or O(q^2)) evaluation and, where a closed form
exists, a fast path. Values are plain Python ``complex``; comparisons go through
``close`` with the tolerances below.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .arith import (
    euler_phi,
    factorize,
    inv,
    jacobi_symbol,
    mobius,
    num_divisors,
    reduced_residues,
    legendre_table,
)

SIMPLE_RTOL = 1e-9
VQ_RTOL = 1e-6
_CHUNK = 1 << 22


def close(a: complex, b: complex, tol: float = 1e-6) -> bool:
    """Absolute tolerance ``tol`` scaled by max(1, magnitude)."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def e(num: int, q: int = 1) -> complex:
    """e(num/q) = exp(2 pi i num/q), with the numerator reduced exactly first."""
    r = int(num) % q
    return cmath.exp(2j * math.pi * (r / q))


def _roots(q: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(q) / q)


class Vec4(NamedTuple):
    x1: int
    x2: int
    x3: int
    x4: int

    def norm(self) -> int:
        return max(abs(c) for c in self)

    def sq(self) -> int:
        return sum(c * c for c in self)

    def dot(self, other) -> int:
        return sum(a * b for a, b in zip(self, other))


ZERO4 = Vec4(0, 0, 0, 0)


# --------------------------------------------------------------------------
# Gauss sums


def gauss_direct(q: int, m: int, n: int) -> complex:
    x = np.arange(q, dtype=np.int64)
    idx = ((m % q) * (x * x % q) + (n % q) * x) % q
    return complex(_roots(q)[idx].sum())


def gauss_q1(q: int) -> complex:
    """G(q, 1) = (1 + i^-q)/(1 + i^-1) sqrt(q)."""
    i_neg_q = (1, -1j, -1, 1j)[q % 4]
    return (1 + i_neg_q) / (1 - 1j) * math.sqrt(q)


def c_factor(m: int, k: int) -> complex:
    if m % 2 == 0:
        raise ValueError("c(m, k) needs odd m")
    if k < 2:
        raise ValueError("c(m, k) needs k >= 2")
    if k % 2 == 0:
        return (1 + 1j ** (m % 4)) / math.sqrt(2)
    return e(m, 8)


def _gauss_odd(r: int, m: int, n: int) -> complex:
    # (r, 2m) = 1
    if r == 1:
        return 1
    phase = e(-inv(4 * m, r) * n * n, r)
    return phase * jacobi_symbol(m, r) * gauss_q1(r)


def _gauss_two_power(k: int, m: int, n: int) -> complex:
    # m odd
    if k == 0:
        return 1
    if k == 1:
        return 0 if (m + n) % 2 else 2
    if n % 2:
        return 0
    q = 1 << k
    half = n // 2
    return e(-inv(m, q) * half * half, q) * 2 ** ((k + 1) / 2) * c_factor(m, k)


def gauss_closed(q: int, m: int, n: int) -> complex:
    m %= q
    n %= q
    d = math.gcd(q, m)
    if d > 1:
        if n % d:
            return 0j
        return d * gauss_closed(q // d, m // d, n // d)
    k = (q & -q).bit_length() - 1
    r = q >> k
    return complex(_gauss_odd(r, m << k, n) * _gauss_two_power(k, m * r, n))


# --------------------------------------------------------------------------
# Kloosterman / Ramanujan / character sums


def kloosterman(q: int, m: int, n: int) -> complex:
    xs, xinv = reduced_residues(q)
    idx = ((m % q) * xs + (n % q) * xinv) % q
    return complex(_roots(q)[idx].sum())


def kloosterman_many(q: int, ms: Sequence[int], ns: Sequence[int]) -> np.ndarray:
    """K(q, m_i, n_i) for paired arrays of arguments, by direct summation."""
    xs, xinv = reduced_residues(q)
    ms = np.asarray(ms, dtype=np.int64) % q
    ns = np.asarray(ns, dtype=np.int64) % q
    idx = (ms[:, None] * xs[None, :] + ns[:, None] * xinv[None, :]) % q
    return _roots(q)[idx].sum(axis=1)


def ramanujan_closed(q: int, m: int) -> int:
    d = math.gcd(q, m)
    f = factorize(q)
    return mobius(q // d) * (euler_phi(f) // euler_phi(q // d))


def weil_bound(q: int, m: int, n: int) -> float:
    return num_divisors(q) * math.sqrt(q) * math.sqrt(math.gcd(q, m, n))


def ramanujan_prime_power(p: int, s: int, m: int) -> int:
    """c_{p^s}(m) without factorizing p^s."""
    q = p**s
    if m % q == 0:
        return q - q // p
    if m % (q // p) == 0:
        return -(q // p)
    return 0


def _kloosterman_pp(p: int, s: int, m: int, n: int) -> complex:
    q = p**s
    if n % q == 0:
        return ramanujan_prime_power(p, s, m)
    if m % q == 0:
        return ramanujan_prime_power(p, s, n)
    return kloosterman(q, m, n)


def _kloosterman_fast(q: int, m: int, n: int) -> complex:
    if n % q == 0:
        return ramanujan_closed(q, m)
    if m % q == 0:
        return ramanujan_closed(q, n)
    return kloosterman(q, m, n)


def _poly_values(p: int, coeffs: Sequence[int]) -> np.ndarray:
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def char_sum_poly(p: int, coeffs: Sequence[int]) -> complex:
    """Sum over x mod p of ((f(x))/p); ``coeffs[i]`` is the coefficient of x**i."""
    return complex(int(legendre_table(p)[_poly_values(p, coeffs)].sum(dtype=np.int64)))


def _trim(coeffs, p):
    c = [x % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return c


def is_constant_times_square(p: int, coeffs: Sequence[int]) -> bool:
    """True when f = c*g^2 over F_p (including the zero polynomial and constants)."""
    c = _trim(coeffs, p)
    if len(c) <= 1:
        return True
    deg = len(c) - 1
    if deg % 2:
        return False
    lead_inv = pow(c[-1], -1, p)
    h = [x * lead_inv % p for x in c]
    k = deg // 2
    # monic g determined top-down from the k highest non-leading coefficients of h
    g = [0] * (k + 1)
    g[k] = 1
    half = pow(2, -1, p)
    for i in range(1, k + 1):
        # coefficient of x^(2k-i) in g^2 is 2*g[k-i] + sum of cross terms among higher g
        s = sum(g[k - j] * g[k - (i - j)] for j in range(1, i))
        g[k - i] = (h[2 * k - i] - s) * half % p
    sq = [0] * (2 * k + 1)
    for i, a in enumerate(g):
        for j, b in enumerate(g):
            sq[i + j] = (sq[i + j] + a * b) % p
    return sq == h


# --------------------------------------------------------------------------
# V_q


@dataclass(frozen=True)
class VqParams:
    """Arguments of V_q(N, d, v, b, n).

    The standard regime is 2 \\nmid N d with d squarefree (``is_standard``); the
    twisted moduli produced by CRT splitting keep N but replace d by d*q'' and
    are also accepted.
    """

    q: int
    N: int
    d: int
    v: int
    b: Vec4
    n: Vec4 = ZERO4

    def __post_init__(self):
        if self.q < 1 or self.d < 1:
            raise ValueError("q and d must be positive")
        object.__setattr__(self, "b", Vec4(*self.b))
        object.__setattr__(self, "n", Vec4(*self.n))

    @property
    def is_standard(self) -> bool:
        from .arith import is_squarefree

        return self.N % 2 == 1 and self.d % 2 == 1 and is_squarefree(self.d)


def vq_direct(params: VqParams) -> complex:
    """Literal double sum: reduced a mod q, each Gauss factor by direct summation."""
    q, N, d, v, b, n = params.q, params.N, params.d, params.v, params.b, params.n
    if q == 1:
        return 1 + 0j
    a, ainv = reduced_residues(q)
    roots = _roots(q)
    x = np.arange(q, dtype=np.int64)
    x2 = x * x % q
    outer = roots[(a * ((b.sq() - N) % q) + ainv * (v % q)) % q]
    rows = max(1, _CHUNK // q)
    total = 0j
    for lo in range(0, len(a), rows):
        ac = a[lo : lo + rows]
        m = ac * (d * d % q) % q
        prod = outer[lo : lo + rows].copy()
        for bj, nj in zip(b, n):
            lin = (ac * (2 * d * bj % q) + nj) % q
            idx = (m[:, None] * x2[None, :] + lin[:, None] * x[None, :]) % q
            prod *= roots[idx].sum(axis=1)
        total += prod.sum()
    return complex(total)


def _restricted_kloosterman(q: int, p: int, a0: int, m: int, n: int) -> complex:
    """Sum over a = a0 (mod p), a mod q, of e((m a + n a^-1)/q); p does not divide a0."""
    if q < 2**31:
        a = a0 % p + p * np.arange(q // p, dtype=np.int64)
        ainv = np.array([pow(int(x), -1, q) for x in a], dtype=np.int64)
        idx = ((m % q) * a % q + (n % q) * ainv % q) % q
        return complex(np.exp(2j * np.pi * idx / q).sum())
    return sum(e(m * a + n * pow(a, -1, q), q) for a in range(a0 % p, q, p))


def vq_prime_power(p: int, s: int, N: int, D: int, w: int, b: Sequence[int], n: Sequence[int]) -> complex:
    """V_{p^s}(N, D, w, b, n) by closed forms; needs p^2 ∤ D, and D odd when p = 2."""
    q = p**s
    b = Vec4(*b)
    n = Vec4(*n)
    if p == 2:
        if D % 2 == 0:
            raise ValueError("p = 2 leaf needs odd D")
        if s == 1:
            val = e(b.sq() - N + w, 2)
            for bj, nj in zip(b, n):
                if (D * D + 2 * D * bj + nj) % 2:
                    return 0j
                val *= 2
            return val
        if any(nj % 2 for nj in n):
            return 0j
        half = Vec4(*(nj // 2 for nj in n))
        dinv = inv(D, q)
        m = (w - dinv * dinv * half.sq()) % q
        return -(2 ** (2 * s + 2)) * e(-dinv * n.dot(b), q) * _kloosterman_pp(p, s, -N, m)
    if D % p:
        dinv = inv(D, q)
        m = (w - inv(4 * D * D, q) * n.sq()) % q
        return p ** (2 * s) * e(-dinv * n.dot(b), q) * _kloosterman_pp(p, s, -N, m)
    if D % (p * p) == 0:
        raise ValueError("p^2 | D is outside the closed-form cases")
    if any(nj % p for nj in n):
        return 0j
    if s == 1:
        return p**4 * _kloosterman_pp(p, 1, b.sq() - N, w)
    Dp = D // p
    nn = Vec4(*(nj // p for nj in n))
    # admissible a: p | 2 a D' b_j + n'_j for every j
    forced = None
    for bj, nj in zip(b, nn):
        if bj % p == 0:
            if nj % p:
                return 0j
            continue
        cls = (-nj * inv(2 * Dp * bj, p)) % p
        if cls == 0 or (forced is not None and cls != forced):
            return 0j
        forced = cls
    dpinv = inv(Dp, q)
    m = (w - inv(4 * Dp * Dp, q) * nn.sq()) % q
    phase = e(-dpinv * nn.dot(b), q)
    if forced is None:
        ksum = _kloosterman_pp(p, s, -N, m)
    else:
        ksum = _restricted_kloosterman(q, p, forced, -N, m)
    return p ** (2 * s + 4) * phase * ksum


def vq_fast(params: VqParams) -> complex:
    """V_q via CRT splitting into prime powers, each evaluated in closed form."""
    q = params.q
    if q == 1:
        return 1 + 0j
    total = 1 + 0j
    for p, s in factorize(q).factors:
        ps = p**s
        rest = q // ps
        r = inv(rest, ps)
        total *= vq_prime_power(p, s, params.N, params.d * rest, r * r * params.v, params.b, params.n)
    return total


def vq_bound(params: VqParams, constant: float = 4.0) -> float:
    """constant * tau(q) q^{5/2} (q,N)^{1/2} (q, N - |b|^2)^{1/2} (q, d^2)^2."""
    q, N, d = params.q, params.N, params.d
    return (
        constant
        * num_divisors(q)
        * q**2.5
        * math.sqrt(math.gcd(q, N))
        * math.sqrt(math.gcd(q, N - params.b.sq()))
        * math.gcd(q, d * d) ** 2
    )


def vq_tolerance(params: VqParams) -> float:
    return VQ_RTOL * max(1.0, params.q**2.5 * params.d**4)


def vanishes_by_divisibility(params: VqParams) -> bool:
    """True when some n_j is not divisible by (q, d), forcing V_q = 0."""
    g = math.gcd(params.q, params.d)
    return any(nj % g for nj in params.n)
