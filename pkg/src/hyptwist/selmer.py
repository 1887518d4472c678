"""Local Selmer conditions and fake 2-Selmer groups of quadratic twists.

Local square-class tuples are encoded as F_2 bitsets.  At an odd prime p,
coordinate k owns bit 2k (valuation parity) and bit 2k+1 (unit part is a
non-residue).  At the real place bit k is set when coordinate k is negative.
Each local condition is a subspace of that local space; the global group is
cut out of the candidate space by parity-check rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import gf2
from .arith import (
    REAL,
    Place,
    as_place,
    factorize,
    is_local_square,
    jacobi,
    square_class,
    valuation,
)
from .curve import Curve
from .descent import SquareClassTuple, delta_twisted, all_two_torsion, delta_twisted_two_torsion
from .errors import EvenPlace, PreconditionViolated
from .places import GOOD, MULTIPLICATIVE, classify_prime

GOOD_UNRAMIFIED = "GoodUnramified"
MULTIPLICATIVE_COND = "MultiplicativeCond"
RAMIFIED_TWIST = "RamifiedTwistCond"
REAL_COND = "RealCond"
NO_CONDITION = "NoCondition"

EXACT = "exact"
SKIPPED = "skipped"
HEURISTIC = "heuristic"


def local_bits(n: int, v: Place) -> int:
    return n if v.is_real else 2 * n


def local_vector(coords: Sequence, v: Place) -> int:
    """Bitset of the local square classes of a tuple of nonzero rationals."""
    out = 0
    for k, c in enumerate(coords):
        c = Fraction(c)
        if v.is_real:
            if c < 0:
                out |= 1 << k
            continue
        p = v.prime
        e = valuation(c, p)
        if e % 2:
            out |= 1 << (2 * k)
        unit = Fraction(c) / Fraction(p) ** e
        if jacobi(unit.numerator * unit.denominator, p) == -1:
            out |= 1 << (2 * k + 1)
    return out


def local_sigma(n: int, v: Place) -> list[int]:
    """Basis of the local classes whose coordinate product is a local square."""
    if v.is_real:
        return gf2.kernel([(1 << n) - 1], n)
    val_row = sum(1 << (2 * k) for k in range(n))
    unit_row = sum(1 << (2 * k + 1) for k in range(n))
    return gf2.kernel([val_row, unit_row], 2 * n)


@dataclass(frozen=True)
class LocalCondition:
    """Subspace of the local space at ``place``; ``generators`` is None for NoCondition."""

    place: Place
    kind: str
    n: int
    generators: Optional[tuple[int, ...]]
    rigor: str = EXACT
    pair: Optional[tuple[int, int]] = None

    @property
    def width(self) -> int:
        return local_bits(self.n, self.place)

    def subspace(self) -> list[int]:
        if self.generators is None:
            return local_sigma(self.n, self.place)
        return gf2.rref(self.generators, self.width)

    @property
    def dim(self) -> int:
        return len(self.subspace())

    def parity_rows(self) -> list[int]:
        if self.generators is None:
            return []
        return gf2.annihilator(self.generators, self.width)

    def accepts(self, z: SquareClassTuple | Sequence[int]) -> bool:
        if self.generators is None:
            return True
        return gf2.in_span(local_vector(tuple(z), self.place), self.generators, self.width)

    def to_json(self) -> dict:
        out = {"place": str(self.place), "kind": self.kind, "rigor": self.rigor, "dim": self.dim}
        if self.pair:
            out["type"] = list(self.pair)
        return out


def _unramified(n: int, extra_rows: Iterable[int] = ()) -> list[int]:
    rows = [1 << (2 * k) for k in range(n)]
    rows.append(sum(1 << (2 * k + 1) for k in range(n)))
    rows.extend(extra_rows)
    return gf2.kernel(rows, 2 * n)


def _torsion_images(C: Curve, t: int, v: Place) -> list[int]:
    return [local_vector(delta_twisted_two_torsion(C, t, i).coords, v) for i in range(1, C.degree + 1)]


def real_sample_points(C: Curve, t: int) -> list[Fraction]:
    """A rational point in each open interval between roots on which t*f > 0."""
    roots = sorted(C.roots)
    samples = [Fraction(roots[0] - 1)]
    samples += [Fraction(a + b, 2) for a, b in zip(roots, roots[1:])]
    samples.append(Fraction(roots[-1] + 1))
    return [x for x in samples if t * C.f(x) > 0]


def local_condition(C: Curve, t: int, v) -> LocalCondition:
    """Image of the local connecting map of the twist by t, as a subspace."""
    v = as_place(v)
    t = square_class(t)
    n = C.degree
    if v.is_real:
        gens = [local_vector([t * (x - a) for a in C.roots], v) for x in real_sample_points(C, t)]
        gens += _torsion_images(C, t, v)
        return LocalCondition(v, REAL_COND, n, tuple(gf2.rref(gens, n)))
    p = v.prime
    if p == 2:
        raise EvenPlace("the 2-adic condition is not computed")
    pc = classify_prime(C, p)
    t_ramified = t % p == 0
    if pc.kind == GOOD:
        if not t_ramified:
            return LocalCondition(v, GOOD_UNRAMIFIED, n, tuple(_unramified(n)))
        gens = _torsion_images(C, t, v)
        return LocalCondition(v, RAMIFIED_TWIST, n, tuple(gf2.rref(gens, 2 * n)))
    if pc.kind == MULTIPLICATIVE:
        i, j = pc.pair
        if t_ramified:
            return LocalCondition(v, NO_CONDITION, n, None, SKIPPED, pc.pair)
        pair_row = (1 << (2 * (i - 1) + 1)) | (1 << (2 * (j - 1) + 1))
        gens = _unramified(n, [pair_row]) + _torsion_images(C, t, v)
        return LocalCondition(v, MULTIPLICATIVE_COND, n, tuple(gf2.rref(gens, 2 * n)), EXACT, pc.pair)
    return LocalCondition(v, NO_CONDITION, n, None, SKIPPED)


def no_condition(C: Curve, v) -> LocalCondition:
    return LocalCondition(as_place(v), NO_CONDITION, C.degree, None, SKIPPED)


@dataclass(frozen=True)
class SelmerSystem:
    curve: Curve
    t: int
    support: tuple[int, ...]
    conditions: tuple[LocalCondition, ...]
    basis_vectors: tuple[int, ...]
    rigor: dict = field(hash=False, compare=False)

    @property
    def n(self) -> int:
        return self.curve.degree

    @property
    def dim(self) -> int:
        return len(self.basis_vectors)

    @property
    def rank_upper(self) -> int:
        return self.dim - 2 * self.curve.genus

    @property
    def basis(self) -> list[SquareClassTuple]:
        return [vector_to_tuple(b, self.support, self.n) for b in self.basis_vectors]

    @property
    def is_clean(self) -> bool:
        return HEURISTIC not in self.rigor.values()

    def contains(self, z: SquareClassTuple | Sequence[int]) -> bool:
        vec = tuple_to_vector(tuple(z), self.support)
        if vec is None:
            return False
        return gf2.in_span(vec, self.basis_vectors, self.n * len(self.support))

    def elements(self) -> list[SquareClassTuple]:
        return [vector_to_tuple(b, self.support, self.n) for b in gf2.span_elements(list(self.basis_vectors))]

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "support": list(self.support),
            "dim": self.dim,
            "rankUpper": self.rank_upper,
            "basis": [z.to_json() for z in self.basis],
            "rigor": dict(sorted(self.rigor.items())),
        }


def vector_to_tuple(vec: int, support: Sequence[int], n: int) -> SquareClassTuple:
    m = len(support)
    coords = []
    for k in range(n):
        c = 1
        for s in range(m):
            if (vec >> (k * m + s)) & 1:
                c *= support[s]
        coords.append(c)
    return SquareClassTuple(tuple(coords))


def tuple_to_vector(coords: Sequence[int], support: Sequence[int]) -> Optional[int]:
    """Exponent bitset of a tuple over ``support`` or None if it leaves it."""
    m = len(support)
    index = {q: s for s, q in enumerate(support)}
    vec = 0
    for k, c in enumerate(coords):
        c = square_class(c)
        if c < 0:
            vec |= 1 << (k * m + index[-1])
        for q in factorize(abs(c)).primes():
            if q not in index:
                return None
            vec |= 1 << (k * m + index[q])
    return vec


def selmer_support(C: Curve, t: int) -> tuple[int, ...]:
    primes = set(C.bad_support) | set(factorize(t).primes())
    return (-1,) + tuple(sorted(primes))


def default_places(C: Curve, t: int, real_condition: bool = True) -> list[Place]:
    places = [Place.finite(p) for p in selmer_support(C, t)[1:]]
    if real_condition:
        places.append(REAL)
    return places


def conditions_for(C: Curve, t: int, places: Iterable[Place]) -> list[LocalCondition]:
    out = []
    for v in places:
        try:
            out.append(local_condition(C, t, v))
        except EvenPlace:
            out.append(no_condition(C, v))
    return out


def selmer_from_conditions(C: Curve, t: int, conditions: Sequence[LocalCondition],
                           support: Optional[Sequence[int]] = None) -> SelmerSystem:
    t = square_class(t)
    support = tuple(support) if support is not None else selmer_support(C, t)
    n, m = C.degree, len(support)
    width = n * m
    rows = [sum(1 << (k * m + s) for k in range(n)) for s in range(m)]
    rigor = {"2": SKIPPED}
    for cond in conditions:
        rigor[str(cond.place)] = cond.rigor
        checks = cond.parity_rows()
        if not checks:
            continue
        images = [
            [local_vector([support[s] if kk == k else 1 for kk in range(n)], cond.place) for s in range(m)]
            for k in range(n)
        ]
        for phi in checks:
            row = 0
            for k in range(n):
                for s in range(m):
                    if gf2.parity(phi & images[k][s]):
                        row |= 1 << (k * m + s)
            rows.append(row)
    basis = gf2.kernel(rows, width)
    return SelmerSystem(C, t, support, tuple(conditions), tuple(basis), rigor)


def fake_selmer_upper(C: Curve, t: int = 1, real_condition: bool = True,
                      places: Optional[Iterable] = None) -> SelmerSystem:
    """Group cut out by every condition that genuine Selmer elements satisfy.

    Good primes outside the support force even valuations, which the choice
    of candidate space already encodes.  The prime 2 and bad primes whose
    local image is not described impose nothing and are flagged skipped.
    """
    t = square_class(t)
    if places is None:
        places = default_places(C, t, real_condition)
    else:
        places = [as_place(v) for v in places]
    system = selmer_from_conditions(C, t, conditions_for(C, t, places))
    if not real_condition:
        system.rigor["inf"] = SKIPPED
    return system


def torsion_image_elements(C: Curve, t: int) -> list[SquareClassTuple]:
    """delta_t of all 2^{2g} elements of J[2]."""
    return [delta_twisted(C, t, D) for D in all_two_torsion(C.genus)]


# ------------------------------------------------------------- variation


@dataclass(frozen=True)
class VariationReport:
    X: tuple[int, ...]
    d: int
    d_prime: int
    selmer_dim: int
    selmer_dim_prime: int
    V_dim: int
    V_dim_prime: int
    quotient_dims: dict
    quotient_dims_prime: dict
    equality_holds: bool
    inequality_holds: bool
    remark_bound: Optional[int]
    remark_holds: Optional[bool]
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "X": list(self.X),
            "d": self.d,
            "d_prime": self.d_prime,
            "selmer_dims": [self.selmer_dim, self.selmer_dim_prime],
            "V_dims": [self.V_dim, self.V_dim_prime],
            "quotient_dims": {str(k): v for k, v in sorted(self.quotient_dims.items())},
            "quotient_dims_prime": {str(k): v for k, v in sorted(self.quotient_dims_prime.items())},
            "equality_holds": self.equality_holds,
            "inequality_holds": self.inequality_holds,
            "remark_bound": self.remark_bound,
            "remark_holds": self.remark_holds,
            "notes": list(self.notes),
        }


def _image_dim(system: SelmerSystem, X: Sequence[int], mine: dict, common: dict) -> int:
    """dim of the image of the system in the sum over X of mine_v / common_v."""
    n = system.n
    offsets, width = {}, 0
    for w in X:
        offsets[w] = width
        width += 2 * n
    I = []
    for w in X:
        I += [b << offsets[w] for b in common[w]]
    imgs = []
    for z in system.basis:
        vec = 0
        for w in X:
            vec |= local_vector(z.coords, Place.finite(w)) << offsets[w]
        imgs.append(vec)
    return gf2.rank(imgs + I, width) - gf2.rank(I, width)


def variation_check(C: Curve, d: int, d_prime: int, X: Iterable[int], real_condition: bool = True) -> VariationReport:
    """Compare two twists that agree locally away from X."""
    d, d_prime = square_class(d), square_class(d_prime)
    X = tuple(sorted({as_place(w).prime for w in X}))
    for w in X:
        if w in (0, 2):
            raise PreconditionViolated("places in X must be odd primes")
    outside = {2} | set(C.bad_support) | set(factorize(d * d_prime).primes())
    ratio = Fraction(d, d_prime)
    for p in sorted(outside - set(X)):
        if not is_local_square(ratio, Place.finite(p)):
            raise PreconditionViolated(f"d/d' is not a local square at {p} outside X")
    if real_condition and ratio < 0:
        raise PreconditionViolated("d/d' is not a local square at the real place")

    primes = set(selmer_support(C, d)[1:]) | set(selmer_support(C, d_prime)[1:]) | set(X)
    support = (-1,) + tuple(sorted(primes))

    def system(t):
        places = [Place.finite(p) for p in support[1:]] + ([REAL] if real_condition else [])
        return selmer_from_conditions(C, t, conditions_for(C, t, places), support)

    S, Sp = system(d), system(d_prime)
    conds = {w: local_condition(C, d, w).subspace() for w in X}
    conds_p = {w: local_condition(C, d_prime, w).subspace() for w in X}
    n = C.degree
    common = {w: gf2.intersect(conds[w], conds_p[w], 2 * n) for w in X}
    qd = {w: len(conds[w]) - len(common[w]) for w in X}
    qdp = {w: len(conds_p[w]) - len(common[w]) for w in X}
    V = _image_dim(S, X, conds, common)
    Vp = _image_dim(Sp, X, conds_p, common)
    equality = Sp.dim == S.dim + Vp - V
    inequality = V + Vp <= sum(qd.values())
    notes = []
    remark_bound = remark_holds = None
    if X and all(classify_prime(C, w).kind == GOOD for w in X) and all(
        (d % w == 0) != (d_prime % w == 0) for w in X
    ):
        remark_bound = 2 * C.genus * len(X)
        remark_holds = V + Vp <= remark_bound
    if not equality:
        notes.append("dimension equality fails for the fake Selmer systems")
    if not inequality:
        notes.append("image dimensions exceed the local quotient bound")
    for w in X:
        if local_condition(C, d, w).kind == NO_CONDITION or local_condition(C, d_prime, w).kind == NO_CONDITION:
            notes.append(f"no local condition available at {w}")
    return VariationReport(X, d, d_prime, S.dim, Sp.dim, V, Vp, qd, qdp, equality, inequality,
                           remark_bound, remark_holds, tuple(notes))
