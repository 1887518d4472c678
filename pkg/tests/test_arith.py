from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import nonzero_ints
from hyptwist.arith import (
    REAL,
    Place,
    crt,
    factorize,
    hilbert_symbol,
    is_local_square,
    is_prime,
    jacobi,
    local_square_class,
    reciprocity_product,
    small_primes,
    square_class,
    valuation,
)
from hyptwist.errors import NonCoprimeModuli


def brute_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_is_prime_matches_trial_division():
    assert [n for n in range(2000) if is_prime(n)] == [n for n in range(2000) if brute_is_prime(n)]


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime((2**61 - 1) * (2**31 - 1))
    assert is_prime(2**127 - 1)


def test_factorize_semiprime_beyond_trial_bound():
    p, q = 1000003, 2**31 - 1
    f = factorize(-p * q * q)
    assert f.factors == ((p, 1), (q, 2)) and f.sign == -1


@given(nonzero_ints)
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert f.reconstruct() == n
    assert all(brute_is_prime(p) for p in f.primes())


def test_square_class_examples():
    assert square_class(40) == 10
    assert square_class(-1) == -1
    assert square_class(2002) == 2002
    assert square_class(Fraction(3, 4)) == 3
    assert square_class(Fraction(-2, 3)) == -6


@given(nonzero_ints)
def test_square_class_is_squarefree_and_same_class(n):
    s = square_class(n)
    assert all(e == 1 for _, e in factorize(s).factors)
    r = Fraction(n, s)
    assert r > 0 and math.isqrt(r.numerator) ** 2 == r.numerator and r.denominator == 1


def test_jacobi_examples():
    assert jacobi(2, 7) == 1
    assert jacobi(3, 7) == -1
    assert jacobi(14, 7) == 0


@given(st.integers(-500, 500), st.sampled_from(small_primes(200)[1:]))
def test_jacobi_matches_euler_criterion(a, p):
    e = pow(a % p, (p - 1) // 2, p)
    assert jacobi(a, p) == (0 if a % p == 0 else (1 if e == 1 else -1))


def test_valuation():
    assert valuation(40, 2) == 3
    assert valuation(Fraction(5, 12), 2) == -2
    assert valuation(7, 3) == 0


def test_crt():
    assert crt([(1, 5), (3, 7)]) == 31
    assert crt([(0, 8)]) == 0
    with pytest.raises(NonCoprimeModuli):
        crt([(1, 6), (2, 4)])


# -------- Hilbert symbols: formula against a brute-force conic search


def conic_solvable_mod(a, b, p, k):
    """Primitive solution of a x^2 + b y^2 = z^2 modulo p^k."""
    m = p**k
    squares = {}
    for z in range(m):
        squares.setdefault(z * z % m, []).append(z)
    for x, y in product(range(m), repeat=2):
        v = (a * x * x + b * y * y) % m
        for z in squares.get(v, []):
            if x % p or y % p or z % p:
                return True
    return False


@pytest.mark.parametrize("p,k", [(2, 5), (3, 3), (5, 2), (7, 2)])
def test_hilbert_symbol_matches_conic_search(p, k):
    # representatives of every class with valuation 0 or 1
    units = [u for u in range(1, 8 if p == 2 else p) if u % p] if p != 2 else [1, 3, 5, 7]
    reps = units + [p * u for u in units]
    for a in reps:
        for b in reps:
            want = 1 if conic_solvable_mod(a, b, p, k) else -1
            assert hilbert_symbol(a, b, Place.finite(p)) == want, (a, b, p)


def test_hilbert_examples():
    assert hilbert_symbol(3, 7, REAL) == 1
    assert hilbert_symbol(-1, -1, REAL) == -1
    assert hilbert_symbol(-1, -1, Place.finite(2)) == -1
    assert hilbert_symbol(3, 7, Place.finite(7)) == jacobi(3, 7)
    symbols, prod = reciprocity_product(3, 7)
    assert prod == 1
    assert symbols[Place.finite(7)] == -1


@given(nonzero_ints, nonzero_ints)
def test_reciprocity(a, b):
    _, prod = reciprocity_product(a, b)
    assert prod == 1


@given(nonzero_ints, nonzero_ints, st.sampled_from([0, 2, 3, 5, 7, 11]))
def test_hilbert_symmetric_and_bilinear(a, b, p):
    v = Place(p)
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
    assert hilbert_symbol(a, b * b, v) == 1
    assert hilbert_symbol(a, -a, v) == 1


def test_local_square_class():
    assert local_square_class(-1, REAL).unit_class == -1
    assert is_local_square(17, Place.finite(2))
    assert not is_local_square(5, Place.finite(2))
    assert is_local_square(4, Place.finite(3))
    assert not is_local_square(3, Place.finite(3))


def test_jacobi_against_square_lists_and_reciprocity():
    primes = small_primes(500)[1:]
    for p in primes:
        squares = {x * x % p for x in range(1, p)}
        for a in range(1, p):
            assert jacobi(a, p) == (1 if a in squares else -1)
    for p in primes[:40]:
        for q in primes[:40]:
            if p < q:
                sign = -1 if (p % 4 == 3 and q % 4 == 3) else 1
                assert jacobi(p, q) * jacobi(q, p) == sign


@given(nonzero_ints, nonzero_ints, nonzero_ints, st.sampled_from([0, 2, 3, 5, 7, 13]))
def test_hilbert_bilinear(a, a2, b, p):
    v = Place(p)
    assert hilbert_symbol(a * a2, b, v) == hilbert_symbol(a, b, v) * hilbert_symbol(a2, b, v)


@given(nonzero_ints, nonzero_ints)
def test_square_class_multiplicative(x, y):
    assert square_class(square_class(x) * square_class(y)) == square_class(x * y)
