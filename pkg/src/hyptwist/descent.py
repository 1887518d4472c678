"""Square-class tuples, the connecting map on J[2] and its twisted variants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .arith import (
    LocalSquareClass,
    as_place,
    is_rational_square,
    local_square_class,
    square_class,
    valuation,
)
from .curve import AffinePoint, Curve, is_on_twisted_curve
from .errors import IndexOutOfRange, WeierstrassSupport


@dataclass(frozen=True)
class SquareClassTuple:
    """(2g+1)-tuple of signed squarefree integers with square product."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(square_class(c) for c in self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k: int) -> int:
        return self.coords[k]

    def __mul__(self, other: "SquareClassTuple") -> "SquareClassTuple":
        if len(other) != len(self):
            raise ValueError("tuple lengths differ")
        return SquareClassTuple(tuple(a * b for a, b in zip(self.coords, other.coords)))

    @property
    def in_sigma(self) -> bool:
        return is_rational_square(math.prod(self.coords))

    @property
    def is_trivial(self) -> bool:
        return all(c == 1 for c in self.coords)

    def primes(self) -> set[int]:
        from .arith import factorize

        out: set[int] = set()
        for c in self.coords:
            out |= set(factorize(c).primes())
        return out

    def to_json(self) -> list[int]:
        return list(self.coords)

    @classmethod
    def one(cls, n: int) -> "SquareClassTuple":
        return cls((1,) * n)


def sct(*coords: int) -> SquareClassTuple:
    return SquareClassTuple(tuple(coords))


@dataclass(frozen=True)
class TwoTorsionVector:
    """Element of J[2] in the basis D_1..D_{2g}; bit k-1 is the D_k coefficient."""

    bits: int
    genus: int

    @classmethod
    def basis(cls, i: int, genus: int) -> "TwoTorsionVector":
        """D_i for 1 <= i <= 2g+1; D_{2g+1} is the sum of the basis."""
        n = 2 * genus
        if not 1 <= i <= n + 1:
            raise IndexOutOfRange(f"index {i} outside 1..{n + 1}")
        return cls((1 << n) - 1 if i == n + 1 else 1 << (i - 1), genus)

    @classmethod
    def from_indices(cls, indices: Iterable[int], genus: int) -> "TwoTorsionVector":
        acc = cls(0, genus)
        for i in indices:
            acc = acc + cls.basis(i, genus)
        return acc

    def __add__(self, other: "TwoTorsionVector") -> "TwoTorsionVector":
        return TwoTorsionVector(self.bits ^ other.bits, self.genus)

    def support(self) -> list[int]:
        return [k + 1 for k in range(2 * self.genus) if (self.bits >> k) & 1]


def all_two_torsion(genus: int) -> Iterator[TwoTorsionVector]:
    for b in range(1 << (2 * genus)):
        yield TwoTorsionVector(b, genus)


def weil_pairing(D: TwoTorsionVector, E: TwoTorsionVector) -> int:
    """Bilinear extension of e(D_i, D_j) = -1 for i != j, +1 for i = j."""
    x, y = D.bits, E.bits
    exponent = bin(x).count("1") * bin(y).count("1") - bin(x & y).count("1")
    return -1 if exponent % 2 else 1


def _check_index(C: Curve, i: int) -> None:
    if not 1 <= i <= C.degree:
        raise IndexOutOfRange(f"index {i} outside 1..{C.degree}")


def delta_two_torsion(C: Curve, i: int) -> SquareClassTuple:
    """delta(D_i): a_i - a_j at j != i, the product of those at i."""
    _check_index(C, i)
    row = C.diff_table[i - 1]
    coords = [row[j] for j in range(C.degree)]
    coords[i - 1] = math.prod(row[j] for j in range(C.degree) if j != i - 1)
    return SquareClassTuple(tuple(coords))


def delta_divisor(C: Curve, t: int, P: AffinePoint) -> SquareClassTuple:
    """delta([P] - [oo]) on t*y^2 = f(x): coordinate k is t*(x(P) - a_k)."""
    if not is_on_twisted_curve(C, t, P):
        raise ValueError("point is not on the twisted curve")
    if P.y == 0:
        raise WeierstrassSupport("divisor is supported at a Weierstrass point")
    return SquareClassTuple(tuple(square_class(Fraction(t) * (P.x - a)) for a in C.roots))


def cup_character(d: int, D: TwoTorsionVector) -> SquareClassTuple:
    """chi_d cup D: d at every coordinate k with e(D, D_k) = -1."""
    g = D.genus
    return SquareClassTuple(
        tuple(d if weil_pairing(D, TwoTorsionVector.basis(k, g)) == -1 else 1 for k in range(1, 2 * g + 2))
    )


def delta_twisted(C: Curve, d: int, D: TwoTorsionVector) -> SquareClassTuple:
    """delta_d(D) = delta(D) * cup(d, D) for any D in J[2]."""
    acc = SquareClassTuple.one(C.degree)
    for i in D.support():
        acc = acc * delta_two_torsion(C, i)
    return acc * cup_character(d, D)


def delta_twisted_two_torsion(C: Curve, d: int, i: int) -> SquareClassTuple:
    """delta_d(D_i) in closed form: d*(a_i - a_j) off the diagonal, the product on it."""
    _check_index(C, i)
    row = C.diff_table[i - 1]
    coords = [d * row[j] for j in range(C.degree)]
    coords[i - 1] = math.prod(row[j] for j in range(C.degree) if j != i - 1)
    return SquareClassTuple(tuple(coords))


def delta_pair_closed_form(C: Curve, i: int, j: int) -> SquareClassTuple:
    """delta(D_i + D_j) written out directly.

    Coordinate t outside {i, j} is (a_i - a_t)(a_j - a_t); coordinate i is
    -prod_{r != i,j}(a_i - a_r) and symmetrically for j.
    """
    _check_index(C, i)
    _check_index(C, j)
    if i == j:
        raise ValueError("need distinct indices")
    n = C.degree
    coords = []
    for t in range(1, n + 1):
        if t == i or t == j:
            coords.append(-math.prod(C.diff(t, r) for r in range(1, n + 1) if r not in (i, j)))
        else:
            coords.append(C.diff(i, t) * C.diff(j, t))
    return SquareClassTuple(tuple(coords))


def two_torsion_image(C: Curve, t: int = 1) -> list[SquareClassTuple]:
    """delta_t of a basis D_1..D_{2g} of J[2]."""
    return [delta_twisted_two_torsion(C, t, i) for i in range(1, 2 * C.genus + 1)]


@dataclass(frozen=True)
class ValuationVector:
    prime: int
    bits: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.bits)


def valuation_vector(z: SquareClassTuple, w: int) -> ValuationVector:
    if w == 2 or w < 2:
        raise ValueError("w must be an odd prime")
    return ValuationVector(w, tuple(valuation(c, w) % 2 for c in z.coords))


def e_vector(n: int, i: int, j: int) -> tuple[int, ...]:
    """E_{ij}: 1 in coordinates i and j (1-based)."""
    return tuple(1 if k in (i, j) else 0 for k in range(1, n + 1))


def restrict_local(z: SquareClassTuple | Sequence[int], v) -> list[LocalSquareClass]:
    place = as_place(v)
    return [local_square_class(c, place) for c in z]


def is_locally_trivial(z: SquareClassTuple | Sequence[int], v) -> bool:
    return all(c.is_identity for c in restrict_local(z, v))
