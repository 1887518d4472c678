"""Odd-degree hyperelliptic curves y^2 = (x - a_1)...(x - a_{2g+1}) over Q.

Quadratic twists are carried as the pair (curve, t) with model
t*y^2 = f(x); t is stored as its squarefree class.
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import Rational, factorize, square_class
from .errors import DuplicateRoot, EvenDegree


@dataclass(frozen=True)
class AffinePoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def as_pairs(self) -> list[list[int]]:
        return [[self.x.numerator, self.x.denominator], [self.y.numerator, self.y.denominator]]

    @classmethod
    def from_pairs(cls, pairs) -> "AffinePoint":
        (xn, xd), (yn, yd) = pairs
        return cls(Fraction(xn, xd), Fraction(yn, yd))


@dataclass(frozen=True)
class Curve:
    roots: tuple[int, ...]
    genus: int = field(init=False)
    diff_table: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    bad_support: frozenset[int] = field(init=False, repr=False)

    def __post_init__(self):
        roots = tuple(int(a) for a in self.roots)
        if len(roots) < 3 or len(roots) % 2 == 0:
            raise EvenDegree(f"need an odd number (>= 3) of roots, got {len(roots)}")
        if len(set(roots)) != len(roots):
            raise DuplicateRoot(f"roots must be distinct: {list(roots)}")
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "genus", (len(roots) - 1) // 2)
        table = tuple(tuple(ai - aj for aj in roots) for ai in roots)
        object.__setattr__(self, "diff_table", table)
        disc = math.prod(roots[j] - roots[i] for i in range(len(roots)) for j in range(i + 1, len(roots)))
        object.__setattr__(self, "bad_support", frozenset({2} | set(factorize(disc).primes())))

    @property
    def degree(self) -> int:
        return len(self.roots)

    def diff(self, i: int, j: int) -> int:
        """a_i - a_j with 1-based indices."""
        return self.diff_table[i - 1][j - 1]

    def f(self, x: Rational) -> Fraction:
        return math.prod((Fraction(x) - a for a in self.roots), start=Fraction(1))

    def __str__(self) -> str:
        return "a = [" + ", ".join(str(a) for a in self.roots) + "]"


def new_curve(roots: Sequence[int]) -> Curve:
    return Curve(tuple(roots))


_CURVE_LINE = re.compile(r"^\s*(?:a\s*=\s*)?(\[.*\])\s*$")


def parse_curve(text: str) -> Curve:
    """Parse ``a = [c1, c2, ...]`` (the ``a =`` prefix is optional)."""
    for line in text.splitlines() or [text]:
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _CURVE_LINE.match(line)
        if not m:
            raise ValueError(f"cannot parse curve line: {line!r}")
        values = ast.literal_eval(m.group(1))
        if not all(isinstance(v, int) for v in values):
            raise ValueError("curve roots must be integer literals")
        return Curve(tuple(values))
    raise ValueError("empty curve description")


def is_on_twisted_curve(C: Curve, t: Rational, P: AffinePoint) -> bool:
    """True iff t*y^2 = prod(x - a_i) exactly."""
    if t == 0:
        raise ValueError("twist parameter must be nonzero")
    return Fraction(t) * P.y * P.y == C.f(P.x)


def twisted_model_roots(C: Curve, d: int) -> tuple[int, ...]:
    """Roots of the model y^2 = prod(x - d*a_i) of the twist by d.

    The isomorphism over Q(sqrt d) is (x, y) -> (d*x, sqrt(d) * d**g * y).
    """
    return tuple(d * a for a in C.roots)


def twist_class(t: Rational) -> int:
    return square_class(t)


def rescale_point(t: Rational, P: AffinePoint) -> tuple[int, AffinePoint]:
    """Move a point on t*y^2 = f to the model s*y^2 = f with s = class(t).

    t = s * r^2 so y becomes r*y.
    """
    s = square_class(t)
    r2 = Fraction(t) / s
    r = Fraction(math.isqrt(r2.numerator), math.isqrt(r2.denominator))
    assert r * r == r2
    return s, AffinePoint(P.x, P.y * r)


def curves_from_lines(lines: Iterable[str]) -> list[Curve]:
    return [parse_curve(line) for line in lines if line.strip() and not line.lstrip().startswith("#")]
