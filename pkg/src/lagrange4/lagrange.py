"""Four-square representations of N in the box (P/4, 3P/4)^4, the weighted
counts Gamma, F(N, d), Phi(N, d, b), the main term M(N, d), and the sieve
lower-bound assembly.

Weighted sums are accumulated with the normalized bump e^{16} omega_0 and
returned on the original scale (times e^{-64}); the ``normalized`` variants
skip that final factor.
"""

from __future__ import annotations

import csv
import math
import os
import struct
import warnings
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .arith import divisor_sum, primes_between
from .expsum import Vec4
from .localdata import _check_b, _check_odd_squarefree, a_value, count_L_crt, psi
from .oscillatory import KAPPA_SCALE, kappa, omega0_normalized
from .sieve import (
    DELTA,
    ETA,
    SieveWeightTable,
    c0_primes,
    f_lower,
    gamma3,
    gamma4,
    prime_factor_budget,
    rosser_lambda_minus,
    theta_table,
)

ENUM_CEILING = 10**8
CACHE_MAGIC = b"LGR4"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sB3xQQ")  # magic, version, 3 reserved, N, count
ASSEMBLY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class RepresentationSet:
    N: int
    solutions: np.ndarray = field(repr=False)  # (k, 4) int64, lexicographic

    @property
    def P(self) -> float:
        return math.sqrt(self.N)

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return (Vec4(*map(int, row)) for row in self.solutions)

    @cached_property
    def shifted_products(self) -> np.ndarray:
        """x1 x2 x3 x4 + 1 per solution (int64; safe for N below 10^9)."""
        return np.prod(self.solutions, axis=1) + 1

    @cached_property
    def weights(self) -> np.ndarray:
        """prod_j e^{16} omega_0(x_j / P) per solution."""
        w = omega0_normalized(self.solutions / self.P)
        return np.prod(w, axis=1)

    def weighted_sum(self, mask: np.ndarray | None = None, normalized: bool = False) -> float:
        w = self.weights if mask is None else self.weights[mask]
        total = math.fsum(w.tolist())
        return total if normalized else total * KAPPA_SCALE

    def divisible_by(self, d: int) -> np.ndarray:
        return self.shifted_products % d == 0


def _box(N: int) -> np.ndarray:
    """Integers x with P/4 < x < 3P/4, i.e. N < 16x^2 < 9N."""
    lo = math.isqrt(N // 16)
    while 16 * lo * lo <= N:
        lo += 1
    xs = []
    x = lo
    while 16 * x * x < 9 * N:
        xs.append(x)
        x += 1
    return np.array(xs, dtype=np.int64)


def _enumerate(N: int) -> np.ndarray:
    xs = _box(N)
    if len(xs) == 0:
        return np.zeros((0, 4), dtype=np.int64)
    sq = xs * xs
    # right table: all (x3, x4) pairs, sorted by (s, x3, x4)
    i3, i4 = np.meshgrid(np.arange(len(xs)), np.arange(len(xs)), indexing="ij")
    i3, i4 = i3.ravel(), i4.ravel()
    s = sq[i3] + sq[i4]
    order = np.lexsort((i4, i3, s))
    s, i3, i4 = s[order], i3[order], i4[order]
    out = []
    for a in range(len(xs)):
        t = N - sq[a] - sq  # targets for each x2
        lo = np.searchsorted(s, t, side="left")
        hi = np.searchsorted(s, t, side="right")
        cnt = hi - lo
        if not cnt.any():
            continue
        b = np.repeat(np.arange(len(xs)), cnt)
        starts = np.repeat(lo, cnt)
        offs = np.arange(len(b)) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        j = starts + offs
        block = np.empty((len(b), 4), dtype=np.int64)
        block[:, 0] = xs[a]
        block[:, 1] = xs[b]
        block[:, 2] = xs[i3[j]]
        block[:, 3] = xs[i4[j]]
        out.append(block)
    if not out:
        return np.zeros((0, 4), dtype=np.int64)
    return np.concatenate(out)


def _cache_path(N: int, cache_dir: str | os.PathLike | None) -> Path | None:
    cache_dir = cache_dir or os.environ.get("LGR_CACHE_DIR")
    return Path(cache_dir) / f"lgr4_{N}.bin" if cache_dir else None


def save_binary(rs: RepresentationSet, path: str | os.PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, rs.N, len(rs)))
        fh.write(rs.solutions.astype("<i4").tobytes())
    os.replace(tmp, path)


def load_binary(path: str | os.PathLike) -> RepresentationSet:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        magic, version, N, count = _HEADER.unpack(head)
        if magic != CACHE_MAGIC or version != CACHE_VERSION:
            raise ValueError(f"{path}: not a version-{CACHE_VERSION} LGR4 cache")
        body = np.frombuffer(fh.read(), dtype="<i4")
    if body.size != 4 * count:
        raise ValueError(f"{path}: truncated cache ({body.size} of {4 * count} components)")
    return RepresentationSet(N, body.reshape(count, 4).astype(np.int64))


def export_csv(rs: RepresentationSet, path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x1", "x2", "x3", "x4"])
        w.writerows(rs.solutions.tolist())


def enumerate_solutions(N: int, ceiling: int = ENUM_CEILING, cache_dir=None) -> RepresentationSet:
    """All x with x1^2 + ... + x4^2 = N and every x_j in (P/4, 3P/4).

    Meet in the middle: a sorted table of x3^2 + x4^2 is joined against
    N - x1^2 - x2^2, one x1 at a time, which emits rows in lexicographic order.
    """
    N = int(N)
    if N < 1 or N % 2 == 0:
        raise ValueError(f"N must be a positive odd integer, got {N}")
    if N > ceiling:
        raise ValueError(f"N = {N} exceeds the enumeration ceiling {ceiling}")
    path = _cache_path(N, cache_dir)
    if path is not None and path.exists():
        rs = load_binary(path)
        if rs.N == N:
            return rs
    rs = RepresentationSet(N, _enumerate(N))
    if path is not None:
        save_binary(rs, path)
    return rs


@lru_cache(maxsize=16)
def representations(N: int) -> RepresentationSet:
    """Memoized enumerate_solutions (honours LGR_CACHE_DIR)."""
    return enumerate_solutions(N)


# --------------------------------------------------------------------------
# Jacobi's four-square count


@lru_cache(maxsize=4)
def r2_table(limit: int) -> np.ndarray:
    """r2[n] = #{(x, y) in Z^2 : x^2 + y^2 = n} for n <= limit, by enumeration."""
    r = math.isqrt(limit)
    x = np.arange(-r, r + 1, dtype=np.int64)
    s = (x[:, None] ** 2 + x[None, :] ** 2).ravel()
    return np.bincount(s[s <= limit], minlength=limit + 1).astype(np.int64)


def r4(N: int, table: np.ndarray | None = None) -> int:
    """Number of integer quadruples (signs, zeros and order counted) with sum of squares N."""
    t = r2_table(N) if table is None or len(table) <= N else table
    return int(np.dot(t[: N + 1], t[N::-1]))


def r4_all(limit: int) -> np.ndarray:
    """r4[n] for all n <= limit via self-convolution of r2."""
    t = r2_table(limit)
    return np.convolve(t, t)[: limit + 1]


def jacobi_r4_check(N: int) -> tuple[int, int]:
    """(enumerated r4(N), 8 sigma_1(N)) for odd N."""
    if N < 1 or N % 2 == 0:
        raise ValueError(f"N must be a positive odd integer, got {N}")
    return r4(N), 8 * divisor_sum(N)


# --------------------------------------------------------------------------
# weighted sums


def _rs(N) -> RepresentationSet:
    return N if isinstance(N, RepresentationSet) else representations(int(N))


def gamma_sum(N, z: float, normalized: bool = False) -> float:
    """Weighted count of solutions with (x1 x2 x3 x4 + 1, P(z)) = 1."""
    if z < 3:
        raise ValueError(f"z must be >= 3, got {z}")
    rs = _rs(N)
    return rs.weighted_sum(survivor_mask(rs, z), normalized)


def survivor_mask(rs: RepresentationSet, z: float) -> np.ndarray:
    keep = np.ones(len(rs), dtype=bool)
    for p in primes_between(2, z):
        keep &= rs.shifted_products % p != 0
    return keep


def F_of(N, d: int, normalized: bool = False) -> float:
    """Weighted count of solutions with d | x1 x2 x3 x4 + 1."""
    rs = _rs(N)
    _check_odd_squarefree(rs.N, d)
    return rs.weighted_sum(None if d == 1 else rs.divisible_by(d), normalized)


def Phi_of(N, d: int, b: Sequence[int], normalized: bool = False) -> float:
    """Weighted count of solutions with x_j = b_j (mod d) for every j."""
    rs = _rs(N)
    _check_odd_squarefree(rs.N, d)
    b = _check_b(rs.N, d, b)
    mask = np.all(rs.solutions % d == np.asarray(b) % d, axis=1)
    return rs.weighted_sum(mask, normalized)


def M_of(N: int, d: int, normalized: bool = False) -> float:
    """Main term kappa N a(N) Psi(N, d)."""
    N = N.N if isinstance(N, RepresentationSet) else int(N)
    k = kappa()
    base = k.normalized if normalized else k.value
    return base * N * a_value(N).value * psi(N, d)


@dataclass(frozen=True)
class MainTermReport:
    N: int
    d: int
    F: float
    M: float
    R: float
    relative_error: float
    L: int
    fitted_C: float  # |R| / (L N^{3/4} N^{0.05}) on the normalized scale

    def __post_init__(self):
        if self.R != self.F - self.M:
            raise ValueError("R must equal F - M")

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def remainder(N, d: int) -> MainTermReport:
    rs = _rs(N)
    N = rs.N
    if d > N ** (1 / 12):
        warnings.warn(f"d = {d} exceeds N^(1/12) = {N ** (1 / 12):.3f}; outside the main-term regime", stacklevel=2)
    F = F_of(rs, d)
    M = M_of(N, d)
    R = F - M
    L = count_L_crt(N, d)
    Rn = R / KAPPA_SCALE
    if L == 0:
        # no admissible classes: F and M both vanish identically
        rel = fitted = 0.0 if R == 0 else math.inf
    else:
        rel, fitted = R / M, abs(Rn) / (L * N**0.8)
    return MainTermReport(N, d, F, M, R, rel, L, fitted)


# --------------------------------------------------------------------------
# sieve assembly


@dataclass(frozen=True)
class SieveAssemblyReport:
    N: int
    z: float
    D: float
    p0: float
    gamma: float  # Gamma, normalized scale
    lower_bound: float  # sum_d theta(d) F(N, d), normalized scale
    holds: bool
    survivors: int
    survivors_clean: bool  # every surviving x1x2x3x4+1 odd and free of primes in (2, z)
    n_theta: int
    gamma1: float  # kappa N a(N) Gamma3 Gamma4, normalized scale
    gamma3: float
    gamma4: float
    s0: float
    f_s0: float | None
    prime_budget: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _weight_table(D: float, z: float, p0: float) -> SieveWeightTable:
    if z <= p0 or not primes_between(p0, z):
        return SieveWeightTable(D=D, z=z, p0=p0, weights={1: 1})
    return rosser_lambda_minus(D, z, p0)


def sieve_assembly(
    N,
    eta: float = ETA,
    delta: float = DELTA,
    p0: float = 7,
    z: float | None = None,
    D: float | None = None,
) -> SieveAssemblyReport:
    """Compare Gamma with its Rosser lower bound sum_d theta(d) F(N, d).

    z and D default to N^eta and N^delta. When no primes lie in (p0, z) the
    weights collapse to lambda = [t = 1] and the bound is exact
    inclusion-exclusion over the C0 primes below z.
    """
    rs = _rs(N)
    N = rs.N
    z = N**eta if z is None else z
    D = N**delta if D is None else D
    table = _weight_table(D, z, p0)
    c0 = c0_primes(p0, z)
    thetas = theta_table(c0, table)

    keep = survivor_mask(rs, max(z, 3))
    gamma = rs.weighted_sum(keep, normalized=True)
    # evaluate each F(N, d) separately, as the bound is stated
    terms = [th * (rs.weighted_sum(rs.divisible_by(d), True) if d > 1 else rs.weighted_sum(None, True))
             for d, th in sorted(thetas.items())]
    lower = math.fsum(terms)
    holds = gamma >= lower - ASSEMBLY_RTOL * max(abs(gamma), abs(lower))

    n = rs.shifted_products[keep]
    clean = bool(np.all(n % 2 == 1))
    for p in primes_between(2, z):
        clean &= bool(np.all(n % p != 0))

    g3 = gamma3(N, p0, z=z)
    g4 = gamma4(N, table)
    k = kappa()
    s0 = math.log(D) / math.log(z) if z > 1 else math.inf
    return SieveAssemblyReport(
        N=N,
        z=z,
        D=D,
        p0=p0,
        gamma=gamma,
        lower_bound=lower,
        holds=bool(holds),
        survivors=int(keep.sum()),
        survivors_clean=clean,
        n_theta=len(thetas),
        gamma1=k.normalized * N * a_value(N).value * g3 * g4,
        gamma3=g3,
        gamma4=g4,
        s0=s0,
        f_s0=f_lower(s0) if 2 < s0 < 3 else None,
        prime_budget=prime_factor_budget(eta),
    )
