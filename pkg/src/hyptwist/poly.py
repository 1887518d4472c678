"""Dense univariate polynomials over Q (Fractions) or F_p (ints mod p).

A polynomial is a tuple of coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is ``()``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Tuple

Poly = Tuple


class PolyRing:
    """Arithmetic in K[x] for K = Q (``p is None``) or K = F_p."""

    def __init__(self, p: Optional[int] = None):
        self.p = p

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PolyRing", self.p))

    def __repr__(self) -> str:
        return "QQ[x]" if self.p is None else f"GF({self.p})[x]"

    # coefficients
    def c(self, a):
        if self.p is None:
            return Fraction(a)
        if isinstance(a, Fraction):
            return a.numerator * pow(a.denominator, -1, self.p) % self.p
        return a % self.p

    def inv(self, a):
        if self.p is None:
            return 1 / Fraction(a)
        return pow(a, -1, self.p)

    # polynomials
    def make(self, coeffs: Sequence) -> Poly:
        out = [self.c(a) for a in coeffs]
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    @staticmethod
    def deg(f: Poly) -> int:
        return len(f) - 1

    def add(self, f: Poly, g: Poly) -> Poly:
        n = max(len(f), len(g))
        return self.make([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])

    def neg(self, f: Poly) -> Poly:
        return self.make([-a for a in f])

    def sub(self, f: Poly, g: Poly) -> Poly:
        return self.add(f, self.neg(g))

    def mul(self, f: Poly, g: Poly) -> Poly:
        if not f or not g:
            return ()
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a == 0:
                continue
            for j, b in enumerate(g):
                out[i + j] += a * b
        return self.make(out)

    def scale(self, f: Poly, a) -> Poly:
        return self.make([a * x for x in f])

    def divmod(self, f: Poly, g: Poly) -> tuple[Poly, Poly]:
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(f)
        dg = len(g) - 1
        lead_inv = self.inv(g[-1])
        q = [0] * max(len(f) - dg, 0)
        for k in range(len(f) - 1, dg - 1, -1):
            coef = self.c(r[k] * lead_inv)
            if coef == 0:
                continue
            q[k - dg] = coef
            for j, b in enumerate(g):
                r[k - dg + j] = self.c(r[k - dg + j] - coef * b)
        return self.make(q), self.make(r[:dg] if dg > 0 else [])

    def mod(self, f: Poly, g: Poly) -> Poly:
        return self.divmod(f, g)[1]

    def exact_div(self, f: Poly, g: Poly) -> Poly:
        q, r = self.divmod(f, g)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self, f: Poly) -> Poly:
        if not f:
            return f
        return self.scale(f, self.inv(f[-1]))

    def xgcd(self, f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
        """Return (d, s, t) with d = s*f + t*g monic (or zero)."""
        r0, r1 = f, g
        s0, s1 = self.make([1]), ()
        t0, t1 = (), self.make([1])
        while r1:
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
            t0, t1 = t1, self.sub(t0, self.mul(q, t1))
        if r0:
            k = self.inv(r0[-1])
            return self.scale(r0, k), self.scale(s0, k), self.scale(t0, k)
        return r0, s0, t0

    def evaluate(self, f: Poly, x):
        acc = self.c(0)
        for a in reversed(f):
            acc = self.c(acc * x + a)
        return acc

    def from_roots(self, roots: Sequence, lead=1) -> Poly:
        f = self.make([lead])
        for r in roots:
            f = self.mul(f, self.make([-r, 1]))
        return f
