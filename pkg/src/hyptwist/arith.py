"""Exact integer and rational arithmetic over Q.

Factorization, Jacobi symbols, local square classes, Hilbert symbols and
the product formula, squarefree representatives and CRT.  Rationals are
accepted wherever a square class is all that matters; a fraction n/d is
replaced by the integer n*d, which has the same class.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

from .errors import EffortExceeded, NonCoprimeModuli, ReciprocityViolation

Rational = Union[int, Fraction]

TRIAL_DIVISION_BOUND = 10**6
DEFAULT_EFFORT = 2 * 10**6
DEFAULT_SEED = 20240601

# Deterministic Miller-Rabin bases, valid for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_EXTRA_ROUNDS = 24


@lru_cache(maxsize=1)
def _sieve(limit: int = TRIAL_DIVISION_BOUND) -> tuple[int, ...]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i, f in enumerate(flags) if f)


def small_primes(bound: int) -> list[int]:
    """All primes <= bound (bound at most the trial-division limit)."""
    ps = _sieve()
    if bound > TRIAL_DIVISION_BOUND:
        raise ValueError("bound exceeds sieve range")
    return list(ps[: bisect.bisect_right(ps, bound)])


_config = {"effort": DEFAULT_EFFORT, "seed": DEFAULT_SEED}


def configure(effort: Optional[int] = None, seed: Optional[int] = None) -> dict:
    """Set the process-wide factoring budget and seed; returns the previous values."""
    old = dict(_config)
    if effort is not None:
        if effort <= 0:
            raise ValueError("effort must be positive")
        _config["effort"] = effort
    if seed is not None:
        _config["seed"] = seed
    return old


def is_prime(n: int, seed: Optional[int] = None) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, seeded random bases above."""
    if seed is None:
        seed = _config["seed"]
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x in (1, n - 1):
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if any(witness(a) for a in _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(seed ^ (n & 0xFFFFFFFF))
    return not any(witness(rng.randrange(2, n - 1)) for _ in range(_MR_EXTRA_ROUNDS))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    m = max(n + 1, 2)
    while not is_prime(m):
        m += 1
    return m


def primes_from(start: int) -> Iterator[int]:
    p = start - 1
    while True:
        p = next_prime(p)
        yield p


@dataclass(frozen=True)
class Factorization:
    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def reconstruct(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out


def _brent_rho(n: int, rng: random.Random, budget: list[int]) -> int:
    """Return a nontrivial factor of composite odd n (Brent's variant)."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            budget[0] -= r
            if budget[0] < 0:
                raise EffortExceeded(f"rho splitting of {n} exceeded effort budget")
        if g == n:
            while True:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                if g > 1:
                    break
        if g != n:
            return g


def factorize(n: int, effort_limit: Optional[int] = None, seed: Optional[int] = None) -> Factorization:
    """Exact factorization of a nonzero integer.

    Trial division by primes up to 10**6 (stopping at the square root), then
    Miller-Rabin and seeded Brent-rho on the cofactor.  Raises
    EffortExceeded when rho spends more than ``effort_limit`` iterations.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    effort_limit = _config["effort"] if effort_limit is None else effort_limit
    seed = _config["seed"] if seed is None else seed
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    for p in _sieve():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        stack = [m]
        rng = random.Random(seed)
        budget = [effort_limit]
        while stack:
            c = stack.pop()
            if c == 1:
                continue
            if c <= TRIAL_DIVISION_BOUND**2 or is_prime(c, seed):
                # Cofactors below the squared trial bound have no small factors left.
                found[c] = found.get(c, 0) + 1
                continue
            r = math.isqrt(c)
            if r * r == c:
                stack += [r, r]
                continue
            f = _brent_rho(c, rng, budget)
            stack += [f, c // f]
    return Factorization(n, sign, tuple(sorted(found.items())))


def valuation(n: Rational, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if n == 0:
        raise ValueError("valuation of 0")
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def as_integer_class(x: Rational) -> int:
    """An integer with the same square class as the nonzero rational x."""
    if x == 0:
        raise ValueError("zero has no square class")
    if isinstance(x, Fraction):
        return x.numerator * x.denominator
    return int(x)


def square_class(x: Rational, effort_limit: Optional[int] = None) -> int:
    """The unique signed squarefree integer s with x/s a rational square."""
    n = as_integer_class(x)
    fac = factorize(n, effort_limit)
    s = fac.sign
    for p, e in fac.factors:
        if e % 2:
            s *= p
    return s


def squarefree_primes(s: int) -> tuple[int, ...]:
    """Primes dividing a squarefree integer (sign ignored)."""
    return factorize(s).primes()


def is_rational_square(x: Rational) -> bool:
    if isinstance(x, Fraction):
        return is_rational_square(x.numerator) and is_rational_square(x.denominator)
    return x >= 0 and math.isqrt(x) ** 2 == x


def crt(residues: Sequence[tuple[int, int]]) -> int:
    """Least nonnegative solution of x = r_i mod m_i for pairwise coprime m_i."""
    x, modulus = 0, 1
    for r, m in residues:
        if m < 1:
            raise ValueError("moduli must be positive")
        if math.gcd(modulus, m) != 1:
            raise NonCoprimeModuli(f"modulus {m} shares a factor with {modulus}")
        # x + modulus*k = r (mod m)
        k = (r - x) * pow(modulus, -1, m) % m if m > 1 else 0
        x += modulus * k
        modulus *= m
    return x % modulus


# ---------------------------------------------------------------- places


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: a finite prime, or the real place when ``prime`` is 0."""

    prime: int = 0

    @classmethod
    def real(cls) -> "Place":
        return cls(0)

    @classmethod
    def finite(cls, p: int) -> "Place":
        if p < 2 or not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return cls(p)

    @property
    def is_real(self) -> bool:
        return self.prime == 0

    def __str__(self) -> str:
        return "inf" if self.is_real else str(self.prime)

    @classmethod
    def parse(cls, text: str | int) -> "Place":
        if str(text).strip().lower() in ("inf", "oo", "infinity", "real", "0"):
            return cls.real()
        return cls.finite(int(text))


REAL = Place.real()


def as_place(v: Place | int | str) -> Place:
    if isinstance(v, Place):
        return v
    return Place.parse(v)


@dataclass(frozen=True)
class LocalSquareClass:
    """Class of a rational in Q_v^x / Q_v^x2.

    ``unit_class`` is +1/-1 (quadratic residue bit of the unit part) for odd
    p, the unit part mod 8 for p = 2, and the sign for the real place.
    """

    place: Place
    valuation_parity: int
    unit_class: int

    @property
    def is_identity(self) -> bool:
        return self.valuation_parity == 0 and self.unit_class == 1


def _split(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def local_square_class(x: Rational, v: Place) -> LocalSquareClass:
    n = as_integer_class(x)
    if v.is_real:
        return LocalSquareClass(v, 0, 1 if n > 0 else -1)
    p = v.prime
    e, u = _split(n, p)
    if p == 2:
        return LocalSquareClass(v, e % 2, u % 8)
    return LocalSquareClass(v, e % 2, jacobi(u, p))


def is_local_square(x: Rational, v: Place) -> bool:
    return local_square_class(x, v).is_identity


def hilbert_symbol(a: Rational, b: Rational, v: Place) -> int:
    """Local Hilbert symbol (a, b)_v over Q."""
    a, b = as_integer_class(a), as_integer_class(b)
    if v.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = v.prime
    alpha, u = _split(a, p)
    beta, w = _split(b, p)
    if p == 2:
        eps_u, eps_w = ((u - 1) // 2) % 2, ((w - 1) // 2) % 2
        om_u, om_w = ((u * u - 1) // 8) % 2, ((w * w - 1) // 8) % 2
        e = eps_u * eps_w + alpha * om_w + beta * om_u
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * jacobi(u, p) ** (beta % 2) * jacobi(w, p) ** (alpha % 2)


def reciprocity_product(a: Rational, b: Rational) -> tuple[dict[Place, int], int]:
    """Symbols (a,b)_v at the real place and every prime dividing 2ab.

    All other symbols are trivial.  The product must be +1; a failure is a
    bug in the local symbols and raises ReciprocityViolation.
    """
    ai, bi = as_integer_class(a), as_integer_class(b)
    primes = {2} | set(factorize(ai).primes()) | set(factorize(bi).primes())
    symbols = {REAL: hilbert_symbol(ai, bi, REAL)}
    for p in sorted(primes):
        symbols[Place(p)] = hilbert_symbol(ai, bi, Place(p))
    product = math.prod(symbols.values())
    if product != 1:
        raise ReciprocityViolation(f"product of Hilbert symbols of ({a}, {b}) is {product}")
    return symbols, product
