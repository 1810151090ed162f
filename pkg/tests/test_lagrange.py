import itertools
import math
import warnings

import numpy as np
import pytest

from lagrange4.arith import divisor_sum
from lagrange4.lagrange import (
    CACHE_MAGIC,
    F_of,
    M_of,
    Phi_of,
    MainTermReport,
    enumerate_solutions,
    export_csv,
    gamma_sum,
    jacobi_r4_check,
    load_binary,
    r4,
    r4_all,
    remainder,
    save_binary,
    sieve_assembly,
    survivor_mask,
)
from lagrange4.localdata import count_L_crt, l_solutions, sigma_closed
from lagrange4.oscillatory import kappa


def brute_box(N):
    P = math.sqrt(N)
    xs = [x for x in range(1, math.isqrt(N) + 1) if P / 4 < x < 3 * P / 4]
    return [v for v in itertools.product(xs, repeat=4) if sum(x * x for x in v) == N]


def test_empty_and_tiny():
    assert len(enumerate_solutions(5)) == 0
    assert len(enumerate_solutions(1)) == 0


@pytest.mark.parametrize("N", [1001, 2025, 4999, 12345])
def test_enumeration_matches_brute_force(N):
    rs = enumerate_solutions(N)
    assert [tuple(v) for v in rs] == brute_box(N)


def test_enumeration_properties(small_rs):
    sol = small_rs.solutions
    assert np.all((sol**2).sum(axis=1) == small_rs.N)
    assert np.all(16 * sol**2 > small_rs.N) and np.all(16 * sol**2 < 9 * small_rs.N)
    keys = [tuple(r) for r in sol.tolist()]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_enumeration_rejects():
    with pytest.raises(ValueError):
        enumerate_solutions(1000)
    with pytest.raises(ValueError):
        enumerate_solutions(10**8 + 1)


@pytest.mark.parametrize("N", [1, 5, 9, 15, 9999])
def test_jacobi(N):
    got, want = jacobi_r4_check(N)
    assert got == want == 8 * divisor_sum(N)
    assert r4(N) == r4_all(N)[N]


def test_jacobi_examples():
    assert r4(1) == 8 and r4(5) == 48 and r4(9) == 104


def test_gamma_monotone(desk_rs):
    zs = [3, 5, 10, 30, 100]
    g = [gamma_sum(desk_rs, z, normalized=True) for z in zs]
    assert all(a >= b for a, b in zip(g, g[1:]))
    assert gamma_sum(desk_rs, 3) == pytest.approx(F_of(desk_rs, 1), rel=1e-15)  # no primes in (2, 3)
    with pytest.raises(ValueError):
        gamma_sum(desk_rs, 2)


def test_survivors_are_clean(desk_rs):
    keep = survivor_mask(desk_rs, 30)
    n = desk_rs.shifted_products[keep]
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29):
        assert np.all(n % p != 0)


def test_F_subset_inequalities(desk_rs):
    F1 = F_of(desk_rs, 1, normalized=True)
    for d, e in [(3, 15), (5, 15), (3, 21), (7, 105)]:
        assert F_of(desk_rs, e, normalized=True) <= F_of(desk_rs, d, normalized=True) <= F1


@pytest.mark.parametrize("d", [3, 5, 15])
def test_phi_partition(desk_rs, d):
    total = math.fsum(Phi_of(desk_rs, d, b, normalized=True) for b in l_solutions(desk_rs.N, d))
    assert total == pytest.approx(F_of(desk_rs, d, normalized=True), rel=1e-12, abs=1e-12)


@pytest.mark.slow
def test_phi_main_term_large_N():
    N = 10_000_019
    rs = enumerate_solutions(N)
    k = kappa().normalized
    for b in list(l_solutions(N, 3))[:4]:
        expected = k * N / 3**4 * sigma_closed(N, 3, b)
        assert Phi_of(rs, 3, b, normalized=True) == pytest.approx(expected, rel=0.25)


def test_M_identities():
    N = 1_000_003
    from lagrange4.localdata import a_value
    assert M_of(N, 1) == pytest.approx(kappa().value * N * a_value(N).value, rel=1e-14)
    assert M_of(N, 15) == pytest.approx(M_of(N, 3) * M_of(N, 5) / M_of(N, 1), rel=1e-12)
    assert M_of(N, 1, normalized=True) / M_of(N, 1) == pytest.approx(math.exp(64), rel=1e-12)


def test_remainder_report(desk_rs):
    rep = remainder(desk_rs, 3)
    assert isinstance(rep, MainTermReport)
    assert rep.R == rep.F - rep.M
    assert rep.L == count_L_crt(desk_rs.N, 3)
    with pytest.raises(ValueError):
        MainTermReport(1, 1, 1.0, 0.5, 0.4, 0.0, 1, 0.0)


def test_remainder_zero_L(desk_rs):
    # 1000003 = 3 (mod 5) makes L(N, 5) vanish
    assert count_L_crt(desk_rs.N, 5) == 0
    with pytest.warns(UserWarning):
        rep = remainder(desk_rs, 5)
    assert rep.F == 0.0 and rep.relative_error == 0.0


def test_regime_warning(desk_rs):
    with pytest.warns(UserWarning, match="regime"):
        remainder(desk_rs, 105)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        remainder(desk_rs, 3)


def test_cache_round_trip(tmp_path, small_rs):
    path = tmp_path / "x.bin"
    save_binary(small_rs, path)
    back = load_binary(path)
    assert back.N == small_rs.N and np.array_equal(back.solutions, small_rs.solutions)
    raw = bytearray(path.read_bytes())
    assert raw[:4] == CACHE_MAGIC
    raw[:4] = b"XXXX"
    path.write_bytes(bytes(raw))
    with pytest.raises(ValueError):
        load_binary(path)


def test_cache_dir(tmp_path):
    a = enumerate_solutions(30001, cache_dir=tmp_path)
    assert (tmp_path / "lgr4_30001.bin").exists()
    b = enumerate_solutions(30001, cache_dir=tmp_path)
    assert np.array_equal(a.solutions, b.solutions)


def test_export_csv(tmp_path):
    rs = enumerate_solutions(2025)
    path = tmp_path / "s.csv"
    export_csv(rs, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x1,x2,x3,x4"
    assert len(lines) == len(rs) + 1


def test_sieve_assembly_degenerate(desk_rs):
    rep = sieve_assembly(desk_rs, eta=0.05, delta=0.08)
    assert rep.holds and rep.survivors_clean
    assert rep.gamma == pytest.approx(rep.lower_bound, rel=1e-12)


@pytest.mark.parametrize("D", [1e4, 1e8])
def test_sieve_assembly_nontrivial(desk_rs, D):
    rep = sieve_assembly(desk_rs, p0=7, z=50, D=D)
    assert rep.holds and rep.survivors_clean
    assert rep.n_theta > 8
    assert rep.gamma3 > 0 and rep.gamma1 > 0
    if D >= 1e8:
        # level beyond every squarefree product of the sieve primes: exact
        assert rep.gamma == pytest.approx(rep.lower_bound, rel=1e-10)
