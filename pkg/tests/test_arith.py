import math
import random

import pytest
from hypothesis import given, strategies as st

from lagrange4.arith import (
    FactoredInteger,
    Residue,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    jacobi_symbol,
    mobius,
    mod_inverse,
    multiplicative_suite,
    num_divisors,
    divisor_sum,
    primes_up_to,
    primitive_root,
    xi_p,
)


def brute_divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def test_factorize_examples():
    assert factorize(1).factors == ()
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert factorize(9991).factors == ((97, 1), (103, 1))


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_recomposes_up_to_1e5():
    for n in range(1, 100_001):
        f = factorize(n)
        assert math.prod(p**e for p, e in f.factors) == n


def test_factorize_large_cofactor():
    p, q = 1_000_003, 999_983
    assert factorize(p * q).factors == ((q, 1), (p, 1))
    assert factorize(2**61 - 1).factors == ((2**61 - 1, 1),)


def test_factored_integer_invariants():
    with pytest.raises(ValueError):
        FactoredInteger(12, ((3, 1), (2, 2)))
    with pytest.raises(ValueError):
        FactoredInteger(13, ((2, 2), (3, 1)))


def test_residue_range():
    with pytest.raises(ValueError):
        Residue(7, 7)
    assert Residue(3, 7) == 3


def test_mod_inverse_examples():
    assert mod_inverse(1, 7) == 1
    assert mod_inverse(2, 5) == 3
    with pytest.raises(ValueError, match="not invertible"):
        mod_inverse(3, 6)


@given(st.integers(2, 10**6), st.integers(-(10**9), 10**9))
def test_mod_inverse_involution(q, a):
    if math.gcd(a, q) != 1:
        return
    r = mod_inverse(a, q)
    assert a * r.value % q == 1
    assert mod_inverse(r.value, q).value == a % q


def test_jacobi_examples():
    assert jacobi_symbol(1, 15) == 1
    assert jacobi_symbol(2, 3) == -1
    assert jacobi_symbol(6, 3) == 0
    with pytest.raises(ValueError):
        jacobi_symbol(3, 4)


def test_jacobi_is_euler_criterion():
    for p in primes_up_to(200)[1:]:
        for a in range(p):
            e = pow(a, (p - 1) // 2, p)
            assert jacobi_symbol(a, p) == (e if e <= 1 else -1)


@given(st.integers(-(10**6), 10**6), st.integers(-(10**6), 10**6), st.integers(0, 5000))
def test_jacobi_completely_multiplicative(a, b, k):
    q = 2 * k + 1
    assert jacobi_symbol(a * b, q) == jacobi_symbol(a, q) * jacobi_symbol(b, q)


def test_multiplicative_suite_examples():
    assert multiplicative_suite(1) == (1, 1, 1, 1, True)
    assert multiplicative_suite(12) == (0, 4, 6, 28, False)
    assert multiplicative_suite(30) == (-1, 8, 8, 72, True)


def test_suite_against_brute_force():
    for n in range(1, 400):
        ds = brute_divisors(n)
        assert num_divisors(n) == len(ds)
        assert divisor_sum(n) == sum(ds)
        assert euler_phi(n) == sum(math.gcd(k, n) == 1 for k in range(1, n + 1))
        assert divisors(n) == ds
        # mobius via sum_{d | n} mu(d) = [n = 1]
        assert sum(mobius(d) for d in ds) == (n == 1)


def test_multiplicativity_on_coprime_pairs():
    rnd = random.Random(5)
    done = 0
    while done < 1000:
        m, n = rnd.randint(1, 10**5), rnd.randint(1, 10**5)
        if math.gcd(m, n) != 1:
            continue
        for f in (euler_phi, num_divisors, divisor_sum):
            assert f(m * n) == f(m) * f(n)
        assert mobius(m * n) == mobius(m) * mobius(n)
        done += 1


def test_xi_p():
    assert xi_p(9, 3) == 2
    assert xi_p(9, 5) == 0
    assert xi_p(45, 3) == 2


def test_is_prime_and_primitive_root():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    for p in primes_up_to(500)[1:]:
        g = primitive_root(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1
