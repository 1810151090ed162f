import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lagrange4.arith import is_squarefree, primes_up_to
from lagrange4.expsum import (
    Vec4,
    VqParams,
    c_factor,
    char_sum_poly,
    e,
    gauss_closed,
    gauss_direct,
    gauss_q1,
    is_constant_times_square,
    kloosterman,
    kloosterman_many,
    ramanujan_closed,
    ramanujan_prime_power,
    vanishes_by_divisibility,
    vq_bound,
    vq_direct,
    vq_fast,
    vq_tolerance,
    weil_bound,
)


def test_e_reduces_exactly():
    assert abs(e(10**30 + 1, 4) - 1j) < 1e-15
    assert abs(e(-1, 2) + 1) < 1e-15


def test_vec4_norm():
    assert Vec4(1, -7, 3, 0).norm() == 7


def test_gauss_examples():
    assert gauss_direct(1, 5, 3) == 1
    assert abs(gauss_direct(4, 1, 0) - (2 + 2j)) < 1e-12
    assert abs(gauss_direct(3, 1, 0) - 1j * math.sqrt(3)) < 1e-12
    assert gauss_closed(6, 2, 3) == 0
    assert abs(gauss_closed(4, 1, 0) - (2 + 2j)) < 1e-12
    assert abs(gauss_closed(8, 3, 2) - gauss_direct(8, 3, 2)) < 1e-12


@given(st.integers(1, 512), st.integers(-(10**9), 10**9), st.integers(-(10**9), 10**9))
def test_gauss_closed_matches_direct(q, m, n):
    assert abs(gauss_closed(q, m, n) - gauss_direct(q, m, n)) < 1e-6


def test_gauss_closed_exhaustive_small():
    for q in range(1, 33):
        for m in range(q):
            for n in range(q):
                assert abs(gauss_closed(q, m, n) - gauss_direct(q, m, n)) < 1e-9


def test_gauss_q1_formula():
    for q in range(1, 513):
        assert abs(gauss_q1(q) - gauss_direct(q, 1, 0)) < 1e-8


def test_legendre_twisted_sum():
    # sum_x (x/p) e(mx/p) = (m/p) G(p, 1)
    from lagrange4.arith import jacobi_symbol

    for p in primes_up_to(100)[1:]:
        x = np.arange(p)
        chi = np.array([jacobi_symbol(int(t), p) for t in x])
        g = gauss_direct(p, 1, 0)
        for m in range(p):
            lhs = (chi * np.exp(2j * np.pi * m * x / p)).sum()
            assert abs(lhs - jacobi_symbol(m, p) * g) < 1e-9


def test_c_factor():
    r = (1 + 1j) / math.sqrt(2)
    assert abs(c_factor(1, 2) - r) < 1e-15
    assert abs(c_factor(1, 3) - cmath.exp(2j * math.pi / 8)) < 1e-15
    for m in range(-21, 22, 2):
        for k in range(2, 7):
            assert abs(c_factor(m, k) ** 4 + 1) < 1e-12
    with pytest.raises(ValueError):
        c_factor(2, 3)


def test_kloosterman_examples():
    assert abs(kloosterman(5, 1, 1) - (3 - math.sqrt(5)) / 2) < 1e-12
    assert abs(kloosterman(7, 0, 0) - 6) < 1e-12
    assert abs(weil_bound(5, 1, 1) - 2 * math.sqrt(5)) < 1e-12


@given(st.integers(1, 600), st.integers(0, 10**6), st.integers(0, 10**6))
def test_kloosterman_real_and_weil(q, m, n):
    k = kloosterman(q, m, n)
    assert abs(k.imag) < 1e-9 * q
    assert abs(k) <= weil_bound(q, m, n) + 1e-9 * q
    assert abs(kloosterman_many(q, [m], [n])[0] - k) < 1e-9 * q


def test_ramanujan():
    assert ramanujan_closed(6, 4) == -1
    for q in range(1, 200):
        assert ramanujan_closed(q, q * 3) == sum(math.gcd(k, q) == 1 for k in range(1, q + 1))
        from lagrange4.arith import mobius

        assert ramanujan_closed(q, 1) == mobius(q)
        for m in range(0, 30):
            assert abs(kloosterman(q, m, 0) - ramanujan_closed(q, m)) < 1e-9 * q


def test_ramanujan_prime_power():
    for p in (2, 3, 5, 7):
        for s in range(1, 5):
            for m in range(-60, 60):
                assert ramanujan_prime_power(p, s, m) == ramanujan_closed(p**s, m)


def test_char_sum_examples():
    for p in (3, 5, 7, 101):
        assert abs(char_sum_poly(p, [0, 1])) < 1e-12
    assert abs(char_sum_poly(3, [0, 1, 1]) + 1) < 1e-12
    assert abs(char_sum_poly(5, [0, 0, 1]) - 4) < 1e-12
    assert is_constant_times_square(5, [0, 0, 1])
    assert not is_constant_times_square(3, [0, 1, 1])


@given(st.sampled_from(primes_up_to(200)[1:]), st.lists(st.integers(-50, 50), min_size=2, max_size=6))
def test_char_sum_weil_bound(p, coeffs):
    k = max((i for i, c in enumerate(coeffs) if c % p), default=0)
    if k < 1 or is_constant_times_square(p, coeffs):
        return
    assert abs(char_sum_poly(p, coeffs)) <= (k - 1) * math.sqrt(p) + 1e-9


def test_square_classifier_against_brute():
    p = 7
    squares = set()
    for a in range(1, p):
        for g0 in range(p):
            for g1 in range(1, p):
                # a (g1 x + g0)^2
                squares.add(tuple(a * c % p for c in (g0 * g0, 2 * g0 * g1, g1 * g1)))
    for c0 in range(p):
        for c1 in range(p):
            for c2 in range(1, p):
                assert is_constant_times_square(p, [c0, c1, c2]) == ((c0, c1, c2) in squares)


def test_vq_trivial_modulus():
    assert vq_direct(VqParams(1, 7, 3, 5, (1, 2, 3, 4))) == 1
    assert vq_fast(VqParams(1, 7, 3, 5, (1, 2, 3, 4))) == 1


def valid_params(draw_q, N, d, v, b, n):
    return VqParams(draw_q, N, d, v, b, n)


odd_sqfree = st.sampled_from([d for d in range(1, 120, 2) if is_squarefree(d)])
small_vec = st.tuples(*[st.integers(-40, 40)] * 4)


@given(st.integers(1, 400), st.integers(0, 10**5), odd_sqfree, st.integers(0, 10**4), small_vec, small_vec, st.booleans())
def test_vq_fast_matches_direct(q, k, d, v, b, n, zero_n):
    N = 2 * k + 1
    g = math.gcd(q, d)
    n = (0, 0, 0, 0) if zero_n else tuple(g * x for x in n)
    P = VqParams(q, N, d, v, b, n)
    fast, direct = vq_fast(P), vq_direct(P)
    assert abs(fast - direct) <= vq_tolerance(P)
    assert abs(fast - direct) <= 1e-7 * max(1.0, abs(direct))
    assert abs(fast) <= vq_bound(P, 4.0)


@pytest.mark.parametrize("q", [9, 27, 25, 125, 49, 343, 81, 45, 75, 8, 16, 32, 24, 72])
def test_vq_p_divides_d_higher_powers(q):
    # forced-class branch: p | d, s >= 2, nonzero n
    rng = np.random.default_rng(q)
    for _ in range(15):
        d = 105
        g = math.gcd(q, d)
        n = tuple(int(x) * g for x in rng.integers(-9, 9, size=4))
        b = tuple(int(x) for x in rng.integers(-20, 20, size=4))
        P = VqParams(q, int(rng.integers(0, 1000)) * 2 + 1, d, int(rng.integers(0, q)), b, n)
        assert abs(vq_fast(P) - vq_direct(P)) <= 1e-7 * max(1.0, abs(vq_direct(P)))


def test_vq_multiplicativity():
    from lagrange4.arith import inv

    rng = np.random.default_rng(3)
    for q1, q2 in [(3, 5), (4, 9), (5, 7), (8, 15), (9, 25), (7, 16)]:
        for _ in range(4):
            d = [1, 3, 15, 21, 35][int(rng.integers(5))]
            b = tuple(int(x) for x in rng.integers(-9, 9, size=4))
            g = math.gcd(q1 * q2, d)
            n = tuple(int(x) * g for x in rng.integers(-5, 5, size=4))
            N, v = int(rng.integers(0, 500)) * 2 + 1, int(rng.integers(0, 100))
            lhs = vq_direct(VqParams(q1 * q2, N, d, v, b, n))
            r1, r2 = inv(q2, q1), inv(q1, q2)
            rhs = vq_direct(VqParams(q1, N, d * q2, r1 * r1 * v, b, n)) * vq_direct(VqParams(q2, N, d * q1, r2 * r2 * v, b, n))
            assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(lhs))


def test_vq_vanishing():
    rng = np.random.default_rng(11)
    for q, d in [(3, 3), (9, 3), (15, 5), (21, 7), (45, 15), (25, 5), (12, 3)]:
        g = math.gcd(q, d)
        n = [int(x) * g for x in rng.integers(-5, 5, size=4)]
        n[2] += 1
        P = VqParams(q, 7, d, 4, (1, 2, 3, 4), tuple(n))
        assert vanishes_by_divisibility(P)
        assert abs(vq_direct(P)) < 1e-9 * q**2.5
        assert vq_fast(P) == 0


def test_vq_zero_shift_is_real():
    for q in (3, 5, 9, 15, 16, 45):
        P = VqParams(q, 11, 3, 0, (1, 1, 1, 2))
        v = vq_fast(P)
        assert abs(v.imag) < 1e-9 * max(1.0, abs(v))
