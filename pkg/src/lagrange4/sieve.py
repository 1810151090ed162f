"""Rosser-Iwaniec lower-bound weights of level D, the combined weights theta(d),
the linear lower sieve function f(s) and the product Pi(z).

The small primes are split off into C0 (odd primes <= p0) and sifted exactly by
inclusion-exclusion; the Rosser weights only see primes in (p0, z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .arith import factorize, mobius, primes_between, primes_up_to
from .localdata import psi

ETA = 1 / 24 - 1e-4
DELTA = 1 / 12 - 1e-4
P0 = 1000
EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class SieveParams:
    eta: float = ETA
    delta: float = DELTA
    N: int = 10**6

    def __post_init__(self):
        if not 0 < self.eta < 1:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")
        if not 0 < self.delta < 1 / 12:
            raise ValueError(f"delta must lie in (0, 1/12), got {self.delta}")

    @property
    def z(self) -> float:
        return self.N**self.eta

    @property
    def D(self) -> float:
        return self.N**self.delta

    @property
    def s0(self) -> float:
        return self.delta / self.eta


@dataclass(frozen=True)
class SieveWeightTable:
    D: float
    z: float
    p0: float
    weights: Mapping[int, int] = field(repr=False)

    def __post_init__(self):
        if self.weights.get(1) != 1:
            raise ValueError("lambda(1) must be 1")
        for d, lam in self.weights.items():
            if lam not in (-1, 1) or d > self.D:
                raise ValueError(f"bad weight lambda({d}) = {lam}")

    def __getitem__(self, d: int) -> int:
        return self.weights.get(d, 0)

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def primes(self) -> list[int]:
        return primes_between(self.p0, self.z)


def rosser_lambda_minus(D: float, z: float, p0: float) -> SieveWeightTable:
    """lambda^-(d) = mu(d) on d = p1 p2 ... pr (z > p1 > ... > pr > p0) such that
    p1 ... p_{m-1} p_m^3 < D for every even m <= r, and d <= D; zero otherwise.

    Built by depth-first descent over decreasing primes. A prefix failing the
    condition at an even m kills every extension, so the subtree is pruned.
    """
    if z <= p0:
        raise ValueError(f"need p0 < z, got p0={p0}, z={z}")
    if D < 2:
        raise ValueError(f"level D must be >= 2, got {D}")
    ps = primes_between(p0, z)[::-1]  # decreasing
    weights = {1: 1}

    def descend(start: int, prod: int, r: int):
        for i in range(start, len(ps)):
            p = ps[i]
            m = r + 1
            if m % 2 == 0 and prod * p**3 >= D:
                continue
            d = prod * p
            if d > D:
                # primes further down are smaller; d may still fit
                continue
            weights[d] = -1 if m % 2 else 1
            descend(i + 1, d, m)

    descend(0, 1, 0)
    return SieveWeightTable(D=D, z=z, p0=p0, weights=weights)


def c0_primes(p0: float, z: float | None = None) -> list[int]:
    """Odd primes <= p0 (and < z when given): the exactly sifted part of P(z)."""
    ps = [p for p in primes_up_to(int(math.floor(p0))) if p > 2]
    return ps if z is None else [p for p in ps if p < z]


def theta(d: int, C0_primes: list[int], table: SieveWeightTable) -> int:
    """theta(d) = sum over delta t = d, delta | C0, t | P*(z) of mu(delta) lambda(t)."""
    if d < 1:
        raise ValueError("d must be positive")
    if d == 1:
        return 1
    f = factorize(d)
    if any(e > 1 for _, e in f.factors):
        return 0
    c0 = set(C0_primes)
    delta = 1
    t = 1
    for p in f.primes:
        if p in c0:
            delta *= p
        elif table.p0 < p < table.z:
            t *= p
        else:
            return 0
    return mobius(delta) * table[t]


def theta_table(C0_primes: list[int], table: SieveWeightTable) -> dict[int, int]:
    """All nonzero theta(d), via the product structure."""
    deltas = {1: 1}
    for p in C0_primes:
        deltas.update({dl * p: -mu for dl, mu in list(deltas.items())})
    return {dl * t: mu * lam for dl, mu in deltas.items() for t, lam in table.weights.items()}


def f_lower(s: float) -> float:
    """Linear lower sieve function on 2 < s < 3."""
    if not 2 < s < 3:
        raise ValueError(f"f(s) = 2 e^gamma log(s-1)/s is only valid on (2, 3), got s={s}")
    return 2.0 * math.exp(EULER_GAMMA) * math.log(s - 1.0) / s


def pi_product(N: int, z: float, p0: float, psi_fn: Callable[[int, int], float] = psi) -> float:
    """Product of (1 - Psi(N, p)) over primes p0 < p < z (1 when empty)."""
    if z <= p0:
        raise ValueError(f"need z > p0, got z={z}, p0={p0}")
    logs = [math.log1p(-psi_fn(N, p)) for p in primes_between(p0, z)]
    return math.exp(math.fsum(logs))


def gamma3(N: int, p0: float, psi_fn: Callable[[int, int], float] = psi, z: float | None = None) -> float:
    """Product of (1 - Psi(N, p)) over the C0 primes (those below z, if given)."""
    return math.exp(math.fsum(math.log1p(-psi_fn(N, p)) for p in c0_primes(p0, z)))


def gamma4(N: int, table: SieveWeightTable, psi_fn: Callable[[int, int], float] = psi) -> float:
    """Sum of lambda(t) Psi(N, t) over the weight table."""
    cache: dict[int, float] = {}

    def psi_t(t: int) -> float:
        out = 1.0
        for p in factorize(t).primes:
            if p not in cache:
                cache[p] = psi_fn(N, p)
            out *= cache[p]
        return out

    return math.fsum(lam * psi_t(t) for t, lam in table.weights.items())


def prime_factor_budget(eta: float) -> float:
    """2/eta: an integer coprime to P(z) and of size about N^2 has fewer than
    this many prime factors."""
    if not 0 < eta < 1:
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    return 2.0 / eta


def sieve_sum(n: int, table: SieveWeightTable) -> int:
    """sum over d | n of lambda(d), for n composed of sieve primes."""
    f = factorize(n)
    ps = f.primes
    total = 0
    for mask in range(1 << len(ps)):
        d = 1
        for i, p in enumerate(ps):
            if mask >> i & 1:
                d *= p
        total += table[d]
    return total
