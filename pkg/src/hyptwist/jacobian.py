"""Divisor-class arithmetic on Jacobians of odd-degree models.

The twist by t of C: y^2 = f(x) is handled through the model
Y^2 = F(X) with F = t*f and (X, Y) = (x, t*y), so Cantor's algorithm works
with a non-monic odd-degree F.  Coefficients live in Q (exact Fractions) or
in F_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional, Union

import numpy as np

from .arith import is_prime, primes_from, square_class
from .curve import AffinePoint, Curve, is_on_twisted_curve, rescale_point
from .errors import (
    BadReductionPrime,
    EffortExceeded,
    FieldMismatch,
    IndexOutOfRange,
    WeierstrassPoint,
)
from .ffield import field, prime_power
from .poly import Poly, PolyRing

DEFAULT_BIT_BUDGET = 200_000
DEFAULT_ENUM_BUDGET = 2_000_000


@dataclass(frozen=True)
class MumfordDivisor:
    """Reduced divisor class (u, v); ``p`` is None over Q."""

    u: Poly
    v: Poly
    p: Optional[int] = None

    @property
    def is_identity(self) -> bool:
        return self.u == (1,) or (len(self.u) == 1 and self.u[0] == 1)

    @property
    def degree(self) -> int:
        return len(self.u) - 1

    def height_bits(self) -> int:
        if self.p is not None:
            return 0
        return max(
            (max(abs(c.numerator).bit_length(), c.denominator.bit_length()) for c in self.u + self.v),
            default=0,
        )

    def as_dict(self) -> dict:
        def enc(c):
            return [c.numerator, c.denominator] if isinstance(c, Fraction) else int(c)

        return {"u": [enc(c) for c in self.u], "v": [enc(c) for c in self.v], "p": self.p}


class JacobianModel:
    """Jacobian of the twist t*y^2 = f(x) over Q or over F_p."""

    def __init__(self, C: Curve, t: int = 1, p: Optional[int] = None, bit_budget: int = DEFAULT_BIT_BUDGET):
        if t == 0:
            raise ValueError("twist parameter must be nonzero")
        if p is not None:
            if p == 2 or not is_prime(p) or p in C.bad_support or t % p == 0:
                raise BadReductionPrime(f"{p} is not an odd prime of good reduction for twist {t}")
        self.curve, self.t, self.p = C, t, p
        self.genus = C.genus
        self.ring = PolyRing(p)
        self.F = self.ring.from_roots(C.roots, lead=t)
        self.bit_budget = bit_budget

    def __repr__(self) -> str:
        base = "Q" if self.p is None else f"GF({self.p})"
        return f"JacobianModel({self.curve}, t={self.t}, over {base})"

    # construction
    def identity(self) -> MumfordDivisor:
        return MumfordDivisor(self.ring.make([1]), (), self.p)

    def make(self, u, v) -> MumfordDivisor:
        R = self.ring
        return MumfordDivisor(R.make(u), R.make(v), self.p)

    def point_divisor(self, P: AffinePoint) -> MumfordDivisor:
        """[P] - [oo] for P on t*y^2 = f(x)."""
        R = self.ring
        x0, y0 = R.c(P.x), R.c(P.y * self.t)
        return MumfordDivisor(R.make([-x0, 1]), R.make([y0]), self.p)

    def two_torsion(self, i: int) -> MumfordDivisor:
        if not 1 <= i <= self.curve.degree:
            raise IndexOutOfRange(f"index {i} outside 1..{self.curve.degree}")
        return MumfordDivisor(self.ring.make([-self.curve.roots[i - 1], 1]), (), self.p)

    def is_valid(self, D: MumfordDivisor) -> bool:
        R = self.ring
        if not D.u or D.u[-1] != 1 or R.deg(D.u) > self.genus:
            return False
        if D.v and R.deg(D.v) >= R.deg(D.u):
            return False
        return not R.mod(R.sub(R.mul(D.v, D.v), self.F), D.u)

    # group law
    def _check(self, *Ds: MumfordDivisor) -> None:
        for D in Ds:
            if D.p != self.p:
                raise FieldMismatch(f"divisor over {D.p} used on model over {self.p}")

    def neg(self, D: MumfordDivisor) -> MumfordDivisor:
        self._check(D)
        return MumfordDivisor(D.u, self.ring.neg(D.v), self.p)

    def add(self, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
        """Cantor composition followed by reduction."""
        self._check(D1, D2)
        R, F = self.ring, self.F
        u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
        d1, e1, e2 = R.xgcd(u1, u2)
        d, c1, c2 = R.xgcd(d1, R.add(v1, v2))
        s1, s2, s3 = R.mul(c1, e1), R.mul(c1, e2), c2
        u = R.exact_div(R.mul(u1, u2), R.mul(d, d))
        num = R.add(
            R.add(R.mul(R.mul(s1, u1), v2), R.mul(R.mul(s2, u2), v1)),
            R.mul(s3, R.add(R.mul(v1, v2), F)),
        )
        v = R.mod(R.exact_div(num, d), u)
        while R.deg(u) > self.genus:
            u = R.exact_div(R.sub(F, R.mul(v, v)), u)
            v = R.mod(R.neg(v), u)
        u = R.monic(u)
        v = R.mod(v, u)
        out = MumfordDivisor(u, v, self.p)
        if out.height_bits() > self.bit_budget:
            raise EffortExceeded("divisor coefficients exceeded the bit budget")
        return out

    def double(self, D: MumfordDivisor) -> MumfordDivisor:
        return self.add(D, D)

    def mul(self, D: MumfordDivisor, n: int) -> MumfordDivisor:
        """n*D by left-to-right double-and-add."""
        if n < 0:
            return self.mul(self.neg(D), -n)
        acc = self.identity()
        for bit in bin(n)[2:] if n else "":
            acc = self.double(acc)
            if bit == "1":
                acc = self.add(acc, D)
        return acc

    # enumeration over F_p
    def enumerate_divisors(self, budget: int = DEFAULT_ENUM_BUDGET) -> Iterator[MumfordDivisor]:
        """Every reduced divisor over F_p, by brute force over Mumford pairs."""
        if self.p is None:
            raise FieldMismatch("enumeration requires a finite base field")
        p, g, R = self.p, self.genus, self.ring
        if sum(p ** (2 * d) for d in range(g + 1)) > budget:
            raise EffortExceeded(f"enumerating Mumford pairs over GF({p}) for genus {g}")
        for d in range(g + 1):
            for ucoef in product(range(p), repeat=d):
                u = tuple(ucoef) + (1,)
                for vcoef in product(range(p), repeat=d):
                    v = R.make(vcoef)
                    if not R.mod(R.sub(R.mul(v, v), self.F), u):
                        yield MumfordDivisor(u, v, p)

    def order_by_enumeration(self, budget: int = DEFAULT_ENUM_BUDGET) -> int:
        return sum(1 for _ in self.enumerate_divisors(budget))


Model = JacobianModel


def two_torsion_divisor(C: Curve, i: int, p: Optional[int] = None) -> MumfordDivisor:
    """D_i = [(a_i, 0)] - [oo], i.e. (x - a_i, 0)."""
    return JacobianModel(C, 1, p).two_torsion(i)


def cantor_add(model: JacobianModel, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    return model.add(D1, D2)


def scalar_mul(model: JacobianModel, D: MumfordDivisor, n: int) -> MumfordDivisor:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return model.mul(D, n)


# ------------------------------------------------------------ point counting


def _check_good(C: Curve, t: int, p: int) -> None:
    if p == 2 or p in C.bad_support or t % p == 0:
        raise BadReductionPrime(f"{p} is not an odd prime of good reduction for (C, {t})")


def count_points_curve(C: Curve, t: int, q: int) -> int:
    """#C^t(F_q) for the model t*y^2 = f(x), including the point at infinity."""
    p, _ = prime_power(q)
    _check_good(C, t, p)
    F = field(q)
    s = F.sum_chi_product_of_translates([a % p for a in C.roots], scale=t % p)
    return q + 1 + s


@dataclass(frozen=True)
class LPolynomial:
    p: int
    coefficients: tuple[int, ...]

    @property
    def genus(self) -> int:
        return (len(self.coefficients) - 1) // 2

    def __call__(self, T: int) -> int:
        return sum(c * T**k for k, c in enumerate(self.coefficients))

    def functional_equation_holds(self) -> bool:
        g, c = self.genus, self.coefficients
        return all(c[2 * g - k] == self.p ** (g - k) * c[k] for k in range(g + 1))

    def satisfies_weil_bound(self, tol: float = 1e-6) -> bool:
        """All inverse roots have absolute value sqrt(p)."""
        roots = np.roots(list(self.coefficients)[::-1]) if len(self.coefficients) > 1 else []
        return all(abs(abs(1 / r) - math.sqrt(self.p)) < tol * math.sqrt(self.p) for r in roots)


def l_polynomial_from_counts(p: int, counts: list[int]) -> LPolynomial:
    """L(T) from #C(F_{p^k}), k = 1..g, via Newton's identities."""
    g = len(counts)
    s = [None] + [p**k + 1 - n for k, n in enumerate(counts, start=1)]
    c = [1]
    for k in range(1, g + 1):
        acc = -sum(s[j] * c[k - j] for j in range(1, k + 1))
        if acc % k:
            raise ArithmeticError("point counts inconsistent with an L-polynomial")
        c.append(acc // k)
    for k in range(g + 1, 2 * g + 1):
        c.append(p ** (k - g) * c[2 * g - k])
    return LPolynomial(p, tuple(c))


def jacobian_order(C: Curve, t: int, p: int, budget: int = DEFAULT_ENUM_BUDGET) -> tuple[LPolynomial, int]:
    """L-polynomial of the twist at p and #J^t(F_p) = L(1)."""
    _check_good(C, t, p)
    g = C.genus
    if g > 3:
        raise EffortExceeded("jacobian_order supports genus <= 3")
    if p**g > budget:
        raise EffortExceeded(f"point counting over GF({p}^{g}) exceeds budget")
    counts = [count_points_curve(C, t, p**k) for k in range(1, g + 1)]
    L = l_polynomial_from_counts(p, counts)
    order = L(1)
    if order <= 0 or order % 2 ** (2 * g):
        raise ArithmeticError(f"implausible Jacobian order {order} at p={p}")
    return L, order


# ------------------------------------------------------- non-torsion proofs


@dataclass(frozen=True)
class NonTorsionCertificate:
    t: int
    point: AffinePoint
    divisor: MumfordDivisor
    p1: int
    p2: int
    order1: int
    order2: int
    N: int
    witness_degree: int

    def as_dict(self) -> dict:
        return {"p1": self.p1, "p2": self.p2, "order1": self.order1, "order2": self.order2, "N": self.N,
                "witness_degree": self.witness_degree}


@dataclass(frozen=True)
class Inconclusive:
    reason: str

    def as_dict(self) -> dict:
        return {"inconclusive": self.reason}


def good_primes(C: Curve, t: int, P: Optional[AffinePoint] = None) -> Iterator[int]:
    """Odd primes of good reduction for the twist, avoiding P's denominators."""
    avoid = C.bad_support
    dens = 1 if P is None else P.x.denominator * P.y.denominator
    for p in primes_from(3):
        if p in avoid or t % p == 0 or dens % p == 0:
            continue
        yield p


def nontorsion_certificate(
    C: Curve, t: int, P: AffinePoint, budget: int = DEFAULT_ENUM_BUDGET
) -> Union[NonTorsionCertificate, Inconclusive]:
    """Prove [P] - [oo] has infinite order on J^t, or report Inconclusive.

    Rational torsion injects into J^t(F_p) at odd primes of good reduction,
    so a torsion point has order dividing N = gcd(#J^t(F_p1), #J^t(F_p2));
    N*D != 0 therefore certifies infinite order.
    """
    if not is_on_twisted_curve(C, t, P):
        raise ValueError("point is not on the twisted curve")
    if P.y == 0:
        raise WeierstrassPoint("y(P) = 0: [P] - [oo] is 2-torsion")
    s = square_class(t)
    if s != t:
        t, P = rescale_point(t, P)
    primes = good_primes(C, t, P)
    p1, p2 = next(primes), next(primes)
    try:
        _, n1 = jacobian_order(C, t, p1, budget)
        _, n2 = jacobian_order(C, t, p2, budget)
    except EffortExceeded as exc:
        return Inconclusive(f"point counting: {exc}")
    N = math.gcd(n1, n2)
    J = JacobianModel(C, t)
    D = J.point_divisor(P)
    try:
        ND = J.mul(D, N)
    except EffortExceeded as exc:
        return Inconclusive(f"scalar multiplication: {exc}")
    if ND.is_identity:
        return Inconclusive(f"{N}*D is the identity; point may be torsion")
    return NonTorsionCertificate(t, P, D, p1, p2, n1, n2, N, ND.degree)


def verify_nontorsion(C: Curve, cert: NonTorsionCertificate, budget: int = DEFAULT_ENUM_BUDGET) -> bool:
    """Re-derive a certificate along independent routes.

    Group orders come from Mumford enumeration when affordable (the
    L-polynomial otherwise) and N*D is recomputed by repeated addition.
    """
    if not is_on_twisted_curve(C, cert.t, cert.point) or cert.point.y == 0:
        return False
    orders = []
    for p in (cert.p1, cert.p2):
        if p == 2 or p in C.bad_support or cert.t % p == 0:
            return False
        model = JacobianModel(C, cert.t, p)
        try:
            orders.append(model.order_by_enumeration(budget))
        except EffortExceeded:
            orders.append(jacobian_order(C, cert.t, p, budget)[1])
    if cert.p1 == cert.p2 or orders != [cert.order1, cert.order2]:
        return False
    N = math.gcd(*orders)
    if N != cert.N:
        return False
    J = JacobianModel(C, cert.t)
    D = J.point_divisor(cert.point)
    if N <= 4096:
        acc = J.identity()
        for _ in range(N):
            acc = J.add(acc, D)
    else:
        acc = J.mul(D, N)
    return not acc.is_identity
