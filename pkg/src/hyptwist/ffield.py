"""Small finite fields GF(p^k) with exp/log tables.

Elements are encoded as ints in [0, q): the base-p digits are the
coefficients of a polynomial in a primitive root of a fixed primitive
polynomial, lowest digit first.  Elements of the prime field are therefore
encoded as themselves, and the enumeration order 0, 1, ..., q-1 is the
fixed order used by the search routines.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from .arith import factorize, is_prime
from .errors import EffortExceeded

MAX_FIELD_SIZE = 4 * 10**6


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    fac = factorize(q)
    if len(fac.factors) != 1:
        raise ValueError(f"{q} is not a prime power")
    return fac.factors[0]


def _digits(n: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        n, r = divmod(n, p)
        out.append(r)
    return out


def _encode(digs, p: int) -> int:
    n = 0
    for d in reversed(digs):
        n = n * p + d
    return n


class GF:
    def __init__(self, q: int):
        p, k = prime_power(q)
        if q > MAX_FIELD_SIZE:
            raise EffortExceeded(f"field of size {q} exceeds table budget")
        self.q, self.p, self.k = q, p, k
        self.modulus, self.exp = self._primitive_tables()
        log = np.full(q, -1, dtype=np.int64)
        log[self.exp] = np.arange(q - 1, dtype=np.int64)
        self.log = log

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def _primitive_tables(self):
        p, k, q = self.p, self.k, self.q
        # Monic f = x^k + c_{k-1} x^{k-1} + ... + c_0; x^k = -(lower part).
        for lower in product(range(p), repeat=k):
            if lower[0] == 0:
                continue
            red = [(-c) % p for c in lower]
            state = [0] * k
            if k == 1:
                state[0] = red[0]
            else:
                state[1] = 1
            one = [1] + [0] * (k - 1)
            powers = [1]
            ok = True
            for i in range(1, q - 1):
                code = _encode(state, p)
                if state == one:
                    ok = False
                    break
                powers.append(code)
                # multiply by the generator
                if k == 1:
                    state = [state[0] * red[0] % p]
                else:
                    top = state[-1]
                    state = [0] + state[:-1]
                    state = [(s + top * r) % p for s, r in zip(state, red)]
            if ok and state == one:
                return tuple(lower), np.array(powers, dtype=np.int64)
        raise RuntimeError(f"no primitive polynomial found for GF({q})")

    # scalar operations on encoded elements
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        da, db = _digits(a, self.p, self.k), _digits(b, self.p, self.k)
        return _encode([(x + y) % self.p for x, y in zip(da, db)], self.p)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return _encode([(-x) % self.p for x in _digits(a, self.p, self.k)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.exp[(-self.log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def chi(self, a: int) -> int:
        """Quadratic character: 0 at 0, +1 on squares, -1 otherwise."""
        if a == 0:
            return 0
        return 1 if self.log[a] % 2 == 0 else -1

    def is_square(self, a: int) -> bool:
        return a != 0 and self.log[a] % 2 == 0

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def sum_chi_product_of_translates(self, shifts: list[int], scale: int = 1) -> int:
        """sum over x in GF(q) of chi(scale * prod_i (x - s_i)), s_i in F_p."""
        q, p = self.q, self.p
        xs = np.arange(q, dtype=np.int64)
        low = xs % p
        total_log = np.zeros(q, dtype=np.int64)
        zero = np.zeros(q, dtype=bool)
        for s in shifts:
            vals = xs - low + (low - s) % p
            lg = self.log[vals]
            zero |= lg < 0
            total_log += lg
        total_log += self.log[self.from_int(scale)]
        signs = np.where(total_log % 2 == 0, 1, -1)
        signs[zero] = 0
        return int(signs.sum())


@lru_cache(maxsize=64)
def field(q: int) -> GF:
    return GF(q)


def is_prime_field(q: int) -> bool:
    return is_prime(q)
