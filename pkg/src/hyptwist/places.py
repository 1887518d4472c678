"""Prime classification, genericity witnesses and the explicit finite-field threshold."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .arith import factorize, is_prime, valuation
from .curve import Curve

GOOD = "Good"
MULTIPLICATIVE = "Multiplicative"
OTHER_BAD = "OtherBad"


@dataclass(frozen=True)
class PlaceClass:
    prime: int
    kind: str
    pair: Optional[tuple[int, int]] = None

    def __str__(self) -> str:
        if self.kind == MULTIPLICATIVE:
            return f"Multiplicative{list(self.pair)}"
        return self.kind

    def to_json(self):
        if self.kind == MULTIPLICATIVE:
            return {"class": MULTIPLICATIVE, "type": list(self.pair)}
        return {"class": self.kind}


def classify_prime(C: Curve, p: int) -> PlaceClass:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p not in C.bad_support:
        return PlaceClass(p, GOOD)
    if p == 2:
        return PlaceClass(p, OTHER_BAD)
    hits = []
    n = C.degree
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            v = valuation(C.diff(i, j), p)
            if v:
                hits.append((i, j, v))
    if len(hits) == 1 and hits[0][2] == 1:
        return PlaceClass(p, MULTIPLICATIVE, (hits[0][0], hits[0][1]))
    return PlaceClass(p, OTHER_BAD)


def classify_bad_primes(C: Curve) -> list[PlaceClass]:
    return [classify_prime(C, p) for p in sorted(C.bad_support)]


def multiplicative_primes(C: Curve) -> dict[tuple[int, int], list[int]]:
    """Odd multiplicative primes grouped by type, each list ascending."""
    out: dict[tuple[int, int], list[int]] = defaultdict(list)
    for pc in classify_bad_primes(C):
        if pc.kind == MULTIPLICATIVE:
            out[pc.pair].append(pc.prime)
    return dict(out)


def w_slot_types(g: int) -> list[tuple[int, int]]:
    """Types of w_1..w_{4g^2+2g-1} in index order."""
    n = 2 * g
    slots = [(j, n + 1) for i in range(1, n + 1) for j in range(1, n + 1)]
    slots += [(i, i + 1) for i in range(1, n)]
    return slots


def wprime_slot_types(g: int) -> list[tuple[int, int]]:
    return [(i, 2 * g + 1) for i in range(1, 2 * g + 1)]


def slot_demand(g: int) -> dict[tuple[int, int], int]:
    demand: dict[tuple[int, int], int] = defaultdict(int)
    for ty in w_slot_types(g) + wprime_slot_types(g):
        demand[ty] += 1
    return dict(demand)


@dataclass(frozen=True)
class GenericityWitness:
    W: tuple[int, ...]
    Wprime: tuple[int, ...]
    B: int
    types: dict = field(hash=False, compare=False, default_factory=dict)
    yelton_hypothesis: bool = False

    def to_json(self) -> dict:
        return {
            "W": list(self.W),
            "Wprime": list(self.Wprime),
            "B": self.B,
            "types": {str(p): list(ty) for p, ty in sorted(self.types.items())},
            "yelton_hypothesis": self.yelton_hypothesis,
        }

    def validate(self, C: Curve) -> bool:
        """Re-check distinctness, the bound and every declared type."""
        g = C.genus
        primes = list(self.W) + list(self.Wprime)
        if len(self.W) != 4 * g * g + 2 * g - 1 or len(self.Wprime) != 2 * g:
            return False
        if len(set(primes)) != len(primes) or any(p < self.B for p in primes):
            return False
        wanted = list(zip(self.W, w_slot_types(g))) + list(zip(self.Wprime, wprime_slot_types(g)))
        for p, ty in wanted:
            pc = classify_prime(C, p)
            if pc.kind != MULTIPLICATIVE or pc.pair != ty:
                return False
        return True


@dataclass(frozen=True)
class Deficiency:
    pair: tuple[int, int]
    needed: int
    available: tuple[int, ...]

    def __str__(self) -> str:
        return (
            f"type {{{self.pair[0]},{self.pair[1]}}} needs {self.needed} distinct multiplicative primes "
            f">= B but only {len(self.available)} available {list(self.available)}"
        )


def genericity_deficiencies(C: Curve, B: int) -> list[Deficiency]:
    groups = multiplicative_primes(C)
    out = []
    for ty, need in sorted(slot_demand(C.genus).items()):
        avail = tuple(p for p in groups.get(ty, []) if p >= B)
        if len(avail) < need:
            out.append(Deficiency(ty, need, avail))
    return out


def genericity_scan(C: Curve, B: int) -> Optional[GenericityWitness]:
    """Fill the W slots (index order), then W', with ascending primes per type."""
    if B < 2:
        raise ValueError("B must be at least 2")
    if genericity_deficiencies(C, B):
        return None
    pools = {ty: [p for p in ps if p >= B] for ty, ps in multiplicative_primes(C).items()}
    cursor: dict[tuple[int, int], int] = defaultdict(int)

    def take(ty):
        p = pools[ty][cursor[ty]]
        cursor[ty] += 1
        return p

    g = C.genus
    W = tuple(take(ty) for ty in w_slot_types(g))
    Wp = tuple(take(ty) for ty in wprime_slot_types(g))
    types = {p: ty for p, ty in zip(W + Wp, w_slot_types(g) + wprime_slot_types(g))}
    return GenericityWitness(W, Wp, B, types, yelton_hypothesis(C))


def yelton_hypothesis(C: Curve) -> bool:
    """Some multiplicative prime of type {i, 2g+1} exists for every i <= 2g.

    This is the hypothesis of the endomorphism lemma; only its satisfaction is
    recorded, not the conclusion.
    """
    groups = multiplicative_primes(C)
    return all(groups.get(ty) for ty in wprime_slot_types(C.genus))


def weil_threshold(n: int) -> int:
    """Smallest q0 with q - n - c*sqrt(q) - n*2^(n-1) > 0 for every integer q > q0.

    c = n*2^(n-1) - 2^n + 1 bounds the character sum by c*sqrt(q); the
    excluded zero set contributes at most n per character, whence the
    trailing n*2^(n-1).
    """
    if n < 1:
        raise ValueError("n must be positive")
    c = n * 2 ** (n - 1) - 2**n + 1
    k = n + n * 2 ** (n - 1)

    def fails(q: int) -> bool:
        return not (q - k > 0 and (q - k) ** 2 > c * c * q)

    s = (c + math.sqrt(c * c + 4 * k)) / 2
    q0 = max(int(s * s), 0)
    while fails(q0 + 1):
        q0 += 1
    while q0 > 0 and not fails(q0):
        q0 -= 1
    return q0


def default_bound(C: Curve) -> int:
    return weil_threshold(2 * C.genus + 2)


def factor_differences(C: Curve) -> dict[tuple[int, int], tuple[tuple[int, int], ...]]:
    n = C.degree
    return {(i, j): factorize(C.diff(i, j)).factors for i in range(1, n + 1) for j in range(i + 1, n + 1)}
