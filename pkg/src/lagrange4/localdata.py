"""Local data of the problem: the congruence counts L(N, d), the factors
alpha(N, d), a(N), Psi(N, d), the local factors chi_p of the singular series and
its closed form, and H(N, d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

from .arith import (
    factorize,
    primitive_root,
    inv,
    is_squarefree,
    legendre_table,
    primes_up_to,
    reduced_residues,
    xi_p,
)
from .expsum import Vec4, ZERO4, vq_prime_power

A_PRIME_BOUND = 10**5


def _check_odd_squarefree(N: int, d: int):
    if N % 2 == 0:
        raise ValueError(f"N must be odd, got {N}")
    if d < 1 or d % 2 == 0 or not is_squarefree(d):
        raise ValueError(f"d must be odd and squarefree, got {d}")


# --------------------------------------------------------------------------
# L(N, d)


def _l_classes(N: int, d: int):
    """Yield (b1, b2-array, b3-array, b4-array) blocks of admissible classes.

    b4 is forced to -(b1 b2 b3)^{-1}, so all b_j are reduced residues.
    """
    res, res_inv = reduced_residues(d)
    inv_of = np.zeros(d, dtype=np.int64)
    inv_of[res] = res_inv
    b2, b3 = np.meshgrid(res, res, indexing="ij")
    b2, b3 = b2.ravel(), b3.ravel()
    inv23 = inv_of[b2] * inv_of[b3] % d
    base = (b2 * b2 + b3 * b3) % d
    for b1 in res.tolist():
        b4 = (-inv_of[b1] * inv23) % d
        ok = (b1 * b1 + base + b4 * b4 - N) % d == 0
        yield b1, b2[ok], b3[ok], b4[ok]


def count_L_naive(N: int, d: int) -> int:
    """Number of b in [1, d]^4 with b1 b2 b3 b4 + 1 = 0 and sum b_j^2 = N (mod d)."""
    _check_odd_squarefree(N, d)
    if d == 1:
        return 1
    return sum(int(len(b2)) for _, b2, _, _ in _l_classes(N, d))


def l_solutions(N: int, d: int) -> Iterator[Vec4]:
    """The L(N, d) admissible classes, each component in [1, d]."""
    _check_odd_squarefree(N, d)
    if d == 1:
        yield Vec4(1, 1, 1, 1)
        return
    for b1, b2, b3, b4 in _l_classes(N, d):
        for t in zip(b2.tolist(), b3.tolist(), b4.tolist()):
            yield Vec4(b1, *(x if x else d for x in t))


def count_L_pairs(N: int, p: int) -> int:
    """L(N, p) for an odd prime p in O(p^2).

    With g(c, t) = #{(x, y): xy = c, x^2 + y^2 = t} = (1 + chi(t + 2c))(1 + chi(t - 2c))
    for c != 0, L = sum over c, t of g(c, t) g(-c^{-1}, N - t): the pair (b1, b2)
    fixes (c, t) and (b3, b4) must then realize (-c^{-1}, N - t).
    """
    if p < 3:
        raise ValueError("p must be an odd prime")
    chi = legendre_table(p).astype(np.int16)
    c, cinv = reduced_residues(p)
    cp = (-cinv) % p
    t = np.arange(p, dtype=np.int64)
    total = 0
    rows = max(1, (1 << 22) // p)
    for lo in range(0, p - 1, rows):
        cc = c[lo : lo + rows, None]
        cq = cp[lo : lo + rows, None]
        g1 = (1 + chi[(t + 2 * cc) % p]) * (1 + chi[(t - 2 * cc) % p])
        s = (N - t) % p
        g2 = (1 + chi[(s + 2 * cq) % p]) * (1 + chi[(s - 2 * cq) % p])
        total += int((g1.astype(np.int32) * g2).sum(dtype=np.int64))
    return total


@lru_cache(maxsize=1024)
def _character_gauss_sums(p: int):
    """Discrete-log table and tau(omega^j) = sum_u omega^j(u) e(u/p) for all j,
    where omega(g) = e(1/(p-1)) for the smallest primitive root g."""
    g = primitive_root(p)
    powers = np.empty(p - 1, dtype=np.int64)
    x = 1
    for m in range(p - 1):
        powers[m] = x
        x = x * g % p
    ind = np.zeros(p, dtype=np.int64)
    ind[powers] = np.arange(p - 1)
    tau = np.fft.ifft(np.exp(2j * np.pi * powers / p)) * (p - 1)
    return ind, tau


def count_L_prime(N: int, p: int) -> int:
    """L(N, p) for an odd prime p in O(p log p) via Gauss sums of characters.

    Detecting b1 b2 b3 b4 = -1 with multiplicative characters psi and
    sum b_j^2 = N with additive ones leaves, for h != 0, the fourth powers of
    S(psi, h) = sum_x psi(x) e(h x^2/p). Odd psi give S = 0; for psi = omega^{2k},
    S(psi, h) = omega^{-k}(h) (tau(omega^k) + chi(h) tau(omega^k chi)), so the
    h-sum collapses to Gauss sums again.
    """
    if p < 3:
        raise ValueError("p must be an odd prime")
    n = p - 1
    half = n // 2
    ind, tau = _character_gauss_sums(p)
    k = np.arange(half)
    A = tau[k]
    B = tau[(k + half) % n]
    plus, minus = (A + B) ** 4, (A - B) ** 4
    P = 0.5 * (plus + minus)
    Q = 0.5 * (plus - minus)
    j1 = (-4 * k) % n
    j2 = (j1 + half) % n
    m = (-N) % p
    if m == 0:
        t1 = np.where(j1 == 0, float(n), 0.0)
        t2 = np.where(j2 == 0, float(n), 0.0)
    else:
        im = int(ind[m])
        t1 = np.exp(-2j * np.pi * (j1 * im % n) / n) * tau[j1]
        t2 = np.exp(-2j * np.pi * (j2 * im % n) / n) * tau[j2]
    total = n**4 + complex(np.sum(P * t1 + Q * t2))
    val = total.real / (p * n)
    out = int(round(val))
    if abs(val - out) > 1e-3 or abs(total.imag) > 1e-6 * max(1.0, abs(total)):
        raise ArithmeticError(f"character-sum evaluation of L({N}, {p}) lost precision")
    return out


def count_L_crt(N: int, d) -> int:
    """Product over p | d of L(N, p)."""
    f = d if not isinstance(d, int) else factorize(d)
    _check_odd_squarefree(N, f.value)
    return math.prod(count_L_prime(N, p) for p in f.primes)


@dataclass(frozen=True)
class CharDecomposition:
    N: int
    p: int
    L1: int
    L2: int
    L3: int
    L4: int

    @property
    def L(self) -> int:
        return self.L1 + 3 * self.L2 + 3 * self.L3 + self.L4

    @property
    def delta(self) -> float:
        return self.L1 - (self.p - 1) ** 3 / self.p


def char_decomposition(N: int, p: int) -> CharDecomposition:
    """Counts over the solutions (a1, a2, a3) in (F_p^*)^3 of
    a1 a2 a3 (a1 + a2 + a3 - N) + 1 = 0, weighted by 1, (a1/p), (a1 a2/p) and
    (a1 a2 a3/p). For fixed (a1, a2) the equation is quadratic in a3 and its
    roots are listed explicitly through a square-root table."""
    if p < 3:
        raise ValueError("p must be an odd prime")
    chi = legendre_table(p).astype(np.int64)
    root = np.full(p, -1, dtype=np.int64)
    xs = np.arange(p, dtype=np.int64)
    root[(xs * xs) % p] = xs
    inv2 = inv(2, p)
    res, res_inv = reduced_residues(p)
    a1, a2 = np.meshgrid(res, res, indexing="ij")
    a1, a2 = a1.ravel(), a2.ravel()
    c = a1 * a2 % p
    s = (a1 + a2 - N) % p
    # c a3^2 + c s a3 + 1 = 0
    disc = (c * c % p * (s * s % p) - 4 * c) % p
    has = chi[disc] >= 0
    a1, a2, c, s, disc = a1[has], a2[has], c[has], s[has], disc[has]
    inv_of = np.zeros(p, dtype=np.int64)
    inv_of[res] = res_inv
    r = root[disc]
    inv2c = inv2 * inv_of[c] % p
    roots_a = (-c * s + r) % p * inv2c % p
    roots_b = (-c * s - r) % p * inv2c % p
    double = disc == 0
    L1 = L2 = L3 = L4 = 0
    for a3, mask in ((roots_a, np.ones_like(double)), (roots_b, ~double)):
        a1m, a2m, a3m = a1[mask], a2[mask], a3[mask]
        L1 += int(mask.sum())
        L2 += int(chi[a1m].sum())
        L3 += int(chi[a1m * a2m % p].sum())
        L4 += int(chi[a1m * a2m % p * a3m % p].sum())
    return CharDecomposition(N, p, L1, L2, L3, L4)


# --------------------------------------------------------------------------
# alpha, a(N), Psi


def alpha(N: int, d: int) -> Fraction:
    """Product over p | d of (1 + 1/p)^{-1} (1 - p^{-1-xi_p(N)})^{-1}."""
    _check_odd_squarefree(N, d)
    out = Fraction(1)
    for p in factorize(d).primes:
        out /= Fraction(p + 1, p) * (1 - Fraction(1, p ** (1 + xi_p(N, p))))
    return out


def _a_factor(N: int, p: int) -> float:
    return (1.0 + 1.0 / p) * (1.0 - float(p) ** -(1 + xi_p(N, p)))


@lru_cache(maxsize=16)
def _odd_primes(bound: int) -> np.ndarray:
    return np.array([p for p in primes_up_to(bound) if p > 2], dtype=np.float64)


def a_truncated(N: int, prime_bound: int = A_PRIME_BOUND) -> float:
    """Product over odd p <= prime_bound of (1 + 1/p)(1 - p^{-1-xi_p(N)})."""
    if prime_bound < 3:
        raise ValueError("prime_bound must be at least 3")
    ps = _odd_primes(prime_bound)
    log_prod = float(np.log1p(-(ps**-2.0)).sum())
    # primes dividing N carry the larger factor
    for p in factorize(N).primes:
        if 2 < p <= prime_bound:
            log_prod += math.log(_a_factor(N, p)) - math.log1p(-1.0 / p**2)
    return math.exp(log_prod)


@dataclass(frozen=True)
class AValue:
    value: float
    error: float
    prime_bound: int


def a_value(N: int, prime_bound: int = A_PRIME_BOUND) -> AValue:
    """a(N) with the tail beyond ``prime_bound`` folded in.

    Primes of N above the bound contribute exactly; the remaining tail
    prod_{p > B}(1 - p^{-2}) is approximated by exp(-1/(B log B)), with the
    same quantity reported as the error.
    """
    val = a_truncated(N, prime_bound)
    for p in factorize(N).primes:
        if p > prime_bound:
            val *= _a_factor(N, p) / (1.0 - 1.0 / p**2)
    tail = 1.0 / (prime_bound * math.log(prime_bound))
    return AValue(val * math.exp(-tail), val * tail, prime_bound)


def psi(N: int, d: int) -> float:
    """alpha(N, d) L(N, d) / d^3."""
    _check_odd_squarefree(N, d)
    if d == 1:
        return 1.0
    return float(alpha(N, d) * count_L_crt(N, d)) / d**3


@dataclass(frozen=True)
class LocalDensityRecord:
    N: int
    d: int
    L: int
    alpha: Fraction
    psi: float
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = float(self.alpha * self.L) / self.d**3
        if not math.isclose(self.psi, expected, rel_tol=1e-12, abs_tol=1e-300):
            raise ValueError("psi must equal alpha L / d^3")


def local_density(N: int, d: int, method: str = "crt") -> LocalDensityRecord:
    if method == "naive":
        L = count_L_naive(N, d)
    elif method == "crt":
        L = count_L_crt(N, d)
    else:
        raise ValueError(f"unknown method {method!r}")
    a = alpha(N, d)
    return LocalDensityRecord(
        N, d, L, a, float(a * L) / d**3, {"L": method, "alpha": "exact product", "psi": "alpha*L/d^3"}
    )


def mertens_constant(N: int, z1: float, z2: float, psi_fn: Callable[[int, int], float] = psi) -> tuple[float, float]:
    """(product, L0) with product = prod_{z1 <= p < z2} (1 - Psi(N, p))^{-1} and
    L0 the smallest constant making product <= (log z2/log z1)(1 + L0/log z1)."""
    prod = 1.0
    for p in primes_up_to(math.ceil(z2) - 1):
        if p > 2 and z1 <= p < z2:
            prod /= 1.0 - psi_fn(N, p)
    ratio = math.log(z2) / math.log(z1)
    return prod, (prod / ratio - 1.0) * math.log(z1)


# --------------------------------------------------------------------------
# singular series


def _check_b(N: int, d: int, b: Sequence[int]):
    b = Vec4(*b)
    if d > 1 and ((b.x1 * b.x2 * b.x3 * b.x4 + 1) % d or (b.sq() - N) % d):
        raise ValueError(f"{tuple(b)} is not an admissible class modulo {d}")
    return b


def local_sum_A(N: int, d: int, b: Sequence[int], p: int, s: int) -> float:
    """A_{p^s} = V_{p^s}(N, d, 0, b, 0) / p^{4s} (real)."""
    v = vq_prime_power(p, s, N, d, 0, b, ZERO4)
    return v.real / float(p) ** (4 * s)


def chi_p_series(N: int, d: int, b: Sequence[int], p: int, s_max: int | None = None) -> float:
    """1 + sum_{s <= s_max} A_{p^s}, the series evaluated from V_q."""
    if d % p == 0:
        b = _check_b(N, d, b)
    b = Vec4(*b)
    if s_max is None:
        s_max = xi_p(N, p) + 4
    return 1.0 + math.fsum(local_sum_A(N, d, b, p, s) for s in range(1, s_max + 1))


def chi_p_closed(N: int, d: int, p: int) -> float:
    if p == 2:
        return 1.0
    if d % p == 0:
        return float(p)
    return _a_factor(N, p)


def sigma_euler_product(N: int, d: int, b: Sequence[int], prime_bound: int = A_PRIME_BOUND) -> float:
    """Truncated product of chi_p_series over p <= prime_bound."""
    _check_odd_squarefree(N, d)
    b = _check_b(N, d, b)
    logs = [math.log(chi_p_series(N, d, b, p)) for p in primes_up_to(prime_bound)]
    return math.exp(math.fsum(logs))


def sigma_closed(N: int, d: int, b: Sequence[int], prime_bound: int = A_PRIME_BOUND) -> float:
    """d a(N) alpha(N, d); independent of the admissible class b."""
    _check_odd_squarefree(N, d)
    _check_b(N, d, b)
    return d * a_value(N, prime_bound).value * float(alpha(N, d))


@dataclass(frozen=True)
class SingularSeriesRecord:
    N: int
    d: int
    b: Vec4
    truncated_value: float
    closed_value: float
    truncation_prime_bound: int

    @property
    def relative_gap(self) -> float:
        return abs(self.truncated_value - self.closed_value) / self.closed_value


def singular_series(N: int, d: int, b: Sequence[int], prime_bound: int = A_PRIME_BOUND) -> SingularSeriesRecord:
    b = Vec4(*b)
    return SingularSeriesRecord(
        N, d, b, sigma_euler_product(N, d, b, prime_bound), sigma_closed(N, d, b, prime_bound), prime_bound
    )


def H_of(N: int, d: int, prime_bound: int = A_PRIME_BOUND) -> float:
    """Sum of sigma(N, d, b) over the L(N, d) admissible classes b."""
    return math.fsum(sigma_closed(N, d, b, prime_bound) for b in l_solutions(N, d))


def H_identity(N: int, d: int, prime_bound: int = A_PRIME_BOUND) -> float:
    """d^4 a(N) Psi(N, d)."""
    return d**4 * a_value(N, prime_bound).value * psi(N, d)
