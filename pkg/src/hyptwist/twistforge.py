"""Building twists with a rational point from prime values of linear forms.

Everything is specialised to the rationals: ideals are generated by
positive integers, ray-class conditions become congruences, and the region
of admissible arguments becomes a positivity filter.  No statement about
infinitude is made; each output is checked on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from . import gf2
from .arith import (
    REAL,
    Place,
    as_place,
    factorize,
    hilbert_symbol,
    is_local_square,
    is_prime,
    jacobi,
    primes_from,
    small_primes,
    square_class,
    valuation,
)
from .curve import AffinePoint, Curve, is_on_twisted_curve, rescale_point
from .descent import (
    SquareClassTuple,
    e_vector,
    is_locally_trivial,
    valuation_vector,
)
from .errors import (
    EffortExceeded,
    InvalidParameters,
    PreconditionViolated,
    SearchExhausted,
    VerificationFailed,
)
from .jacobian import Inconclusive, NonTorsionCertificate, nontorsion_certificate, verify_nontorsion
from .places import MULTIPLICATIVE, classify_prime
from .selmer import SelmerSystem, fake_selmer_upper, local_condition

PASS = "pass"
FAIL = "fail"
HEURISTIC = "heuristic"
PARTIAL = "partial"

RANK_EXACTLY_1 = "RankExactly1"
RANK_AT_LEAST_1 = "RankAtLeast1"
INCONCLUSIVE = "Inconclusive"

Form = tuple[int, int, int]  # cx*X + cy*Y + c0


def eval_form(L: Form, x: int, y: int) -> int:
    return L[0] * x + L[1] * y + L[2]


def default_T(C: Curve) -> frozenset[Place]:
    """Infinity, 2, the bad primes and every prime <= 2g+1."""
    primes = set(C.bad_support) | set(small_primes(C.degree))
    return frozenset({REAL} | {Place.finite(p) for p in primes})


def _places(T: Iterable) -> frozenset[Place]:
    return frozenset(as_place(v) for v in T)


def _finite(T: Iterable[Place]) -> list[int]:
    return sorted(v.prime for v in T if not v.is_real)


# ------------------------------------------------------------ linear forms


@dataclass(frozen=True)
class LinearFormSystem:
    curve: Curve
    kappa: int
    rho: int
    lam: int
    mu0: int
    mu1: int
    m: int
    forms: tuple[Form, ...]
    W: tuple[int, ...] = ()
    N: int = 1
    T: frozenset = frozenset()
    congruences: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def r2k(self) -> int:
        return self.rho * self.rho * self.kappa

    def values(self, x: int, y: int) -> tuple[int, ...]:
        return tuple(eval_form(L, x, y) for L in self.forms)

    def identity_holds(self) -> bool:
        """L_i = rho^2 kappa (mX + mu_1) + 1 - a_i rho^2 kappa L_{2g+2}, coefficientwise."""
        r2k, last = self.r2k, self.forms[-1]
        for a, L in zip(self.curve.roots, self.forms[:-1]):
            expect = (r2k * self.m, -a * r2k * last[1], r2k * self.mu1 + 1 - a * r2k * last[2])
            if tuple(L) != expect:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa, "rho": self.rho, "lambda": self.lam, "mu0": self.mu0, "mu1": self.mu1,
            "m": self.m, "N": self.N, "W": list(self.W), "forms": [list(L) for L in self.forms],
        }


def build_linear_forms(C: Curve, kappa: int, rho: int, lam: int, mu0: int, mu1: int, m: int,
                       W: Sequence[int] = (), T: Iterable = ()) -> LinearFormSystem:
    if rho < 1 or m < 1:
        raise InvalidParameters("rho and m must be positive")
    if kappa == 0:
        raise InvalidParameters("kappa must be nonzero")
    if math.gcd(lam, kappa) != 1:
        raise InvalidParameters("lambda must be coprime to kappa")
    r2k = rho * rho * kappa
    c_last = r2k * mu0 + lam
    forms = [(r2k * m, -a * r2k * r2k * m, r2k * mu1 + 1 - a * r2k * c_last) for a in C.roots]
    forms.append((0, r2k * m, c_last))
    places = _places(T)
    N = math.prod(p for p in _finite(places) if p not in set(W))
    system = LinearFormSystem(C, kappa, rho, lam, mu0, mu1, m, tuple(forms), tuple(W), N, places)
    if not system.identity_holds():
        raise VerificationFailed("linear form identity failed")
    # L_i(X, Y) = M_i(mu_1) mod w whenever w | m.
    for w in W:
        ok = m % w == 0 and all(
            (L[0] % w, L[1] % w) == (0, 0)
            and (L[2] - (r2k * mu1 - a * r2k * r2k * mu0 - a * r2k * lam + 1)) % w == 0
            for a, L in zip(C.roots, forms)
        )
        system.congruences[w] = ok
    return system


def toy_system(C: Curve) -> LinearFormSystem:
    """kappa = rho = m = lambda = 1, mu_0 = mu_1 = 0."""
    return build_linear_forms(C, 1, 1, 1, 0, 0, 1)


@dataclass(frozen=True)
class Obstructed:
    p: int
    reason: str


def check_admissibility(system: LinearFormSystem, p: int) -> Union[tuple[int, int], Obstructed]:
    """(u, v) mod p with every form nonzero, following the three-case argument."""
    if not is_prime(p):
        raise InvalidParameters(f"{p} is not prime")

    def ok(u, v):
        return all(val % p for val in system.values(u, v))

    if (system.rho * system.kappa) % p == 0 or system.m % p == 0:
        if ok(0, 0):
            return (0, 0)
        return Obstructed(p, "forms vanish at (0, 0) although p divides rho*kappa*m")
    for v in range(p):
        if eval_form(system.forms[-1], 0, v) % p == 0:
            continue
        for u in range(p):
            if ok(u, v):
                return (u, v)
    return Obstructed(p, "every residue pair is a zero of some form")


# ------------------------------------------------------ candidate assembly


@dataclass(frozen=True)
class SuitableCandidate:
    qs: tuple[int, ...]
    x0: int
    y0: int
    c: int
    gamma: int
    t: int
    point: AffinePoint
    kappa: int

    @property
    def t_class(self) -> int:
        return square_class(self.t)

    def identities_hold(self, C: Curve, rho: int) -> bool:
        g = C.genus
        lhs = Fraction(self.gamma, rho * rho) * math.prod(self.c - a * self.gamma for a in C.roots)
        on_curve = self.t * Fraction(rho, self.gamma ** (g + 1)) ** 2 == C.f(Fraction(self.c, self.gamma))
        return lhs == self.t and on_curve and is_on_twisted_curve(C, self.t, self.point)

    def to_json(self) -> dict:
        return {
            "q": list(self.qs), "x0": self.x0, "y0": self.y0, "c": self.c, "gamma": self.gamma,
            "t": self.t, "point": self.point.as_pairs(),
        }


def assemble_candidate(system: LinearFormSystem, x0: int, y0: int) -> SuitableCandidate:
    C, r2k, g = system.curve, system.r2k, system.curve.genus
    qs = system.values(x0, y0)
    c = r2k * (system.m * x0 + system.mu1) + 1
    gamma = r2k * (r2k * (system.m * y0 + system.mu0) + system.lam)
    t = system.kappa * math.prod(qs)
    P = AffinePoint(Fraction(c, gamma), Fraction(system.rho, gamma ** (g + 1)))
    cand = SuitableCandidate(tuple(qs), x0, y0, c, gamma, t, P, system.kappa)
    if not cand.identities_hold(C, system.rho):
        raise VerificationFailed(f"assembly identity fails at ({x0}, {y0})")
    return cand


def search_prime_tuple(system: LinearFormSystem, box: tuple[int, int, int, int],
                       avoid: Iterable[int] = (), limit: Optional[int] = None) -> list[SuitableCandidate]:
    """All (x0, y0) in [x_lo, x_hi] x [y_lo, y_hi] whose form values are distinct positive primes.

    ``avoid`` lists primes the values must differ from (e.g. the finite part
    of T').  The box is scanned in lexicographic order.
    """
    x_lo, x_hi, y_lo, y_hi = box
    banned = set(avoid)
    out = []
    for x in range(x_lo, x_hi + 1):
        for y in range(y_lo, y_hi + 1):
            vals = system.values(x, y)
            if any(v <= 1 for v in vals) or len(set(vals)) != len(vals):
                continue
            if banned.intersection(vals) or not all(is_prime(v) for v in vals):
                continue
            out.append(assemble_candidate(system, x, y))
            if limit is not None and len(out) >= limit:
                return out
    return out


# ------------------------------------------------------------ (P1) check


def j4_surrogate(C: Curve, p: int) -> bool:
    """p = 1 mod 8 and every root difference is a square mod p.

    Necessary for complete splitting in the 4-torsion field, not sufficient.
    """
    if p % 8 != 1:
        return False
    n = C.degree
    return all(jacobi(C.diff(i, j), p) == 1 for i in range(1, n + 1) for j in range(1, n + 1) if i != j)


def odd_valuation_primes(d: int) -> list[int]:
    return [q for q, e in factorize(d).factors if e % 2]


def check_P1(C: Curve, cand: SuitableCandidate, d: int, p: Optional[int], T: Iterable) -> dict:
    """Per-bullet pass/fail/heuristic states for the first suitability condition."""
    T = _places(T) | {REAL, Place.finite(2)}
    report: dict[str, str] = {}
    d_primes = odd_valuation_primes(d)
    qs = list(cand.qs)
    if p is None or not is_prime(p) or p == 2:
        report["decomposition"] = FAIL
        elements = qs
    else:
        same = square_class(d * p * math.prod(qs)) == cand.t_class
        report["decomposition"] = PASS if same else FAIL
        elements = [p] + qs
    report["pairwise coprime"] = PASS if all(math.gcd(a, b) == 1 for a, b in combinations(elements, 2)) else FAIL
    finite_T = set(_finite(T))
    report["coprime to T"] = PASS if not any(any(e % q == 0 for q in finite_T) for e in elements) else FAIL
    report["coprime to d"] = PASS if not any(any(e % q == 0 for q in d_primes) for e in elements) else FAIL
    if p is None or report["decomposition"] == FAIL:
        for key in ("d nonsquare mod p", "p splits in K(J[4])", "p square locally at T"):
            report[key] = FAIL
    else:
        report["d nonsquare mod p"] = PASS if jacobi(d, p) == -1 else FAIL
        report["p splits in K(J[4])"] = HEURISTIC if j4_surrogate(C, p) else FAIL
        report["p square locally at T"] = PASS if all(is_local_square(p, v) for v in T) else FAIL
    prod = (p or 1) * math.prod(qs)
    places = set(T) | {Place.finite(q) for q in d_primes}
    report["p*prod(q) square locally at T and at d"] = (
        PASS if all(is_local_square(prod, v) for v in places) else FAIL
    )
    return report


def p1_verdict(report: dict) -> str:
    if FAIL in report.values():
        return FAIL
    return HEURISTIC if HEURISTIC in report.values() else PASS


def p1_parameters(C: Curve, d: int, p: int, T: Iterable, lam_bound: int = 10**6) -> tuple[int, int, int]:
    """(kappa, rho, lambda) for an instance without multiplicative slots.

    rho = 8N with N the product of the finite primes of T, lambda = 1 mod rho,
    coprime to kappa = d*p, and p*lambda a square mod each odd-valuation prime
    of d outside T.
    """
    T = _places(T) | {REAL, Place.finite(2)}
    N = math.prod(_finite(T))
    rho = 8 * N
    kappa = d * p
    targets = [q for q in odd_valuation_primes(d) if Place.finite(q) not in T]
    lam = 1
    while lam < lam_bound:
        if math.gcd(lam, kappa) == 1 and all(jacobi(p * lam, q) == 1 for q in targets):
            return kappa, rho, lam
        lam += rho
    raise SearchExhausted("no lambda found")


# ------------------------------------------------------------ (P2) check


def p2_expected(i: int, j: int, k: int, g: int) -> Optional[int]:
    """Required value of the Hilbert-symbol product for z_{i,j} against q_k, or None."""
    n = 2 * g
    if i <= n * n:
        i1, i2 = (i - 1) // n + 1, (i - 1) % n + 1
        if k <= i1:
            return -1 if (i1 == k and i2 == j) else 1
        return None
    ii = i - n * n
    if k <= n:
        return 1
    if k == n + 1:
        return -1 if j in (ii, ii + 1) else 1
    return None


def hilbert_product(a: int, b: int, places: Iterable[Place]) -> int:
    out = 1
    for v in places:
        out *= hilbert_symbol(a, b, v)
    return out


def check_P2(zs: Sequence, qs: Sequence[int], T_prime: Iterable, g: int) -> dict:
    """Evaluate the Hilbert-symbol pattern and the independence of the z-images."""
    n = 2 * g
    count = 4 * g * g + 2 * g - 1
    if len(zs) != count or len(qs) != n + 2:
        raise InvalidParameters(f"need {count} tuples and {n + 2} primes")
    places = sorted(_places(T_prime) | {REAL, Place.finite(2)})
    failures = []
    checked = 0
    rows = []
    for i, z in enumerate(zs, start=1):
        coords = list(z)[:n]
        row = 0
        for j, zj in enumerate(coords, start=1):
            for k, q in enumerate(qs, start=1):
                val = hilbert_product(zj, q, places)
                if val == -1:
                    row |= 1 << ((k - 1) * n + j - 1)
                want = p2_expected(i, j, k, g)
                if want is None:
                    continue
                checked += 1
                if val != want:
                    failures.append([i, j, k])
        rows.append(row)
    r = gf2.rank(rows, (n + 2) * n)
    return {
        "pattern": PASS if not failures else FAIL,
        "checked": checked,
        "failures": failures,
        "rank": r,
        "independent": PASS if r == count else FAIL,
    }


# ------------------------------------------------------- twist scanning


@dataclass(frozen=True)
class TwistCertificate:
    curve: Curve
    t: int
    point: AffinePoint
    nontorsion: Union[NonTorsionCertificate, Inconclusive, None]
    selmer: Optional[SelmerSystem]
    verdict: str
    source: tuple[int, int] = (0, 0)

    def to_json(self) -> dict:
        nt = None
        if isinstance(self.nontorsion, NonTorsionCertificate):
            nt = self.nontorsion.as_dict()
        elif isinstance(self.nontorsion, Inconclusive):
            nt = self.nontorsion.as_dict()
        sel = None
        if self.selmer is not None:
            sel = {"dim": self.selmer.dim, "rankUpper": self.selmer.rank_upper,
                   "rigor": dict(sorted(self.selmer.rigor.items()))}
        return {
            "curve": list(self.curve.roots),
            "t": self.t,
            "point": self.point.as_pairs(),
            "nontorsion": nt,
            "selmer": sel,
            "verdict": self.verdict,
            "source": {"n": self.source[0], "m": self.source[1]},
        }


def decide_verdict(nontorsion, selmer: Optional[SelmerSystem]) -> str:
    if not isinstance(nontorsion, NonTorsionCertificate):
        return INCONCLUSIVE
    if selmer is not None and selmer.rank_upper == 1 and selmer.is_clean:
        return RANK_EXACTLY_1
    return RANK_AT_LEAST_1


def certify_twist(C: Curve, t: int, P: AffinePoint, source=(0, 0), real_condition: bool = True) -> TwistCertificate:
    if not is_on_twisted_curve(C, t, P):
        raise VerificationFailed("point is not on the twist")
    try:
        nt = nontorsion_certificate(C, t, P)
    except EffortExceeded as exc:
        nt = Inconclusive(str(exc))
    try:
        sel = fake_selmer_upper(C, t, real_condition)
    except EffortExceeded:
        sel = None
    return TwistCertificate(C, t, P, nt, sel, decide_verdict(nt, sel), source)


def scan_entry(C: Curve, n: int, m: int) -> Optional[tuple[int, AffinePoint]]:
    """t = m*prod(n - a_i m) and P = (n/m, 1/m^{g+1}) before reduction; None when t = 0."""
    if m < 1 or any(n == a * m for a in C.roots):
        return None
    t = m * math.prod(n - a * m for a in C.roots)
    P = AffinePoint(Fraction(n, m), Fraction(1, m ** (C.genus + 1)))
    if not is_on_twisted_curve(C, t, P):
        raise VerificationFailed(f"scan point ({n}, {m}) is off the twist")
    return t, P


def scan_points(C: Curve, n_bound: int, m_bound: int) -> list[tuple[int, AffinePoint, tuple[int, int]]]:
    """(t, P, (n, m)) for coprime (n, m), first point per square class of t."""
    seen: dict[int, tuple[int, AffinePoint, tuple[int, int]]] = {}
    for m in range(1, m_bound + 1):
        for n in range(-n_bound, n_bound + 1):
            entry = scan_entry(C, n, m) if math.gcd(n, m) == 1 else None
            if entry is None:
                continue
            t, P = rescale_point(*entry)
            if t not in seen:
                seen[t] = (t, P, (n, m))
    return sorted(seen.values(), key=lambda e: (abs(e[0]), e[0]))


def simple_twist_scan(C: Curve, n_bound: int = 10, m_bound: int = 10, real_condition: bool = True) -> list[TwistCertificate]:
    """Twists t = m*prod(n - a_i m) carrying the point (n/m, 1/m^{g+1})."""
    return [certify_twist(C, t, P, src, real_condition) for t, P, src in scan_points(C, n_bound, m_bound)]


def verify_certificate(record: dict, real_condition: bool = True) -> bool:
    """Re-derive a serialized certificate from scratch and compare."""
    C = Curve(tuple(record["curve"]))
    P = AffinePoint.from_pairs(record["point"])
    t = record["t"]
    if not is_on_twisted_curve(C, t, P):
        return False
    fresh = certify_twist(C, t, P, (record["source"]["n"], record["source"]["m"]), real_condition)
    if fresh.to_json() != record:
        return False
    if isinstance(fresh.nontorsion, NonTorsionCertificate) and not verify_nontorsion(C, fresh.nontorsion):
        return False
    if fresh.verdict == RANK_EXACTLY_1:
        sel = fresh.selmer
        if sel.rank_upper != 1 or sel.dim != C.degree:
            return False
    return True


# ------------------------------------------------------------ cocycles


@dataclass(frozen=True)
class ForgedCocycle:
    w: int
    pair: tuple[int, int]
    p1: int
    p2: int
    a_w: int
    b: int
    z: SquareClassTuple
    report: dict = field(compare=False, hash=False)

    def to_json(self) -> dict:
        return {"w": self.w, "type": list(self.pair), "p1": self.p1, "p2": self.p2, "a_p1w": self.a_w,
                "a_p1p2": self.b, "z": self.z.to_json(), "report": self.report}


def _local_square_away(x: int, places: Iterable[Place]) -> bool:
    return all(is_local_square(x, v) for v in places)


def forge_cocycle(C: Curve, w: int, T_prime: Iterable = (), search_bound: int = 10**5) -> ForgedCocycle:
    """Primes p1, p2 and the class z_w = psi cup D_ij, with every claim re-checked.

    Over Q the ray-class Frobenius conditions are replaced by local-square
    congruences at T' - {w}; these imply every quadratic-character identity
    the construction relies on.
    """
    pc = classify_prime(C, w)
    if pc.kind != MULTIPLICATIVE:
        raise PreconditionViolated(f"{w} is not a multiplicative prime")
    i, j = pc.pair
    T = _places(T_prime) | default_T(C)
    if Place.finite(w) not in T:
        raise PreconditionViolated("w must lie in T'")
    away = sorted(T - {Place.finite(w)})
    finite_T = set(_finite(T))
    D = C.diff(i, j)
    Pw = math.prod(C.diff(i, r) for r in range(1, C.degree + 1) if r not in (i, j))

    p1 = a = None
    for q in primes_from(3):
        if q > search_bound:
            raise SearchExhausted("no prime p1 below the search bound")
        if q in finite_T:
            continue
        if _local_square_away(q * w, away):
            p1, a = q, q * w
            break
    target = jacobi(D, p1) * jacobi(Pw, w)
    p2 = None
    for q in primes_from(3):
        if q > search_bound:
            raise SearchExhausted("no prime p2 below the search bound")
        if q in finite_T or q == p1:
            continue
        if not _local_square_away(p1 * q, away):
            continue
        if jacobi(a, q) == 1 and jacobi(D, q) == target:
            p2 = q
            break
    b = p1 * p2
    z = SquareClassTuple(tuple(a if k in (i, j) else 1 for k in range(1, C.degree + 1)))
    report = verify_forged(C, w, (i, j), p1, p2, a, b, z, away)
    if not all(report.values()):
        raise VerificationFailed(f"forged cocycle failed checks: {report}")
    return ForgedCocycle(w, (i, j), p1, p2, a, b, z, report)


def verify_forged(C: Curve, w: int, pair, p1: int, p2: int, a: int, b: int, z: SquareClassTuple,
                  away: Sequence[Place]) -> dict:
    i, j = pair
    D = C.diff(i, j)
    Pw = math.prod(C.diff(i, r) for r in range(1, C.degree + 1) if r not in (i, j))
    three = [Place.finite(w), Place.finite(p1), Place.finite(p2)]
    report = {
        "valuation": valuation_vector(z, w).bits == e_vector(C.degree, i, j),
        "local_triviality": all(is_locally_trivial(z, v) for v in list(away) + [Place.finite(p2)]),
        "reciprocity_b_D": hilbert_product(b, D, three) == 1,
        "reciprocity_a_b": hilbert_product(a, b, three) == 1,
        "restriction_at_w": jacobi(b, w) == jacobi(Pw, w),
        "restriction_at_p1": is_local_square(b * a * -1 * Pw, Place.finite(p1)),
        "selmer_at_w": local_condition(C, b, w).accepts(z),
        "selmer_at_p1": local_condition(C, b, p1).accepts(z),
        "positive_generators": a > 0 and b > 0,
    }
    return report


# ------------------------------------------------------ promising twists


def is_promising(lam: int, W_prime: Sequence[int], T: Iterable, ps: Sequence[int],
                 split_fields: Sequence[int] = ()) -> dict:
    """Clause-by-clause check; the splitting clause only sees the listed quadratic fields."""
    lam = square_class(lam)
    T = _places(T)
    report = {}
    report["even valuation over W'"] = PASS if all(valuation(lam, w) % 2 == 0 for w in W_prime) else FAIL
    rest = [v for v in T if v.is_real or v.prime not in set(W_prime)]
    report["trivial on T - W'"] = PASS if all(is_local_square(lam, v) for v in rest) else FAIL
    report["odd valuation at p_r"] = PASS if ps and all(valuation(lam, p) % 2 for p in ps) else FAIL
    finite_T = set(_finite(T))
    outside = [q for q in odd_valuation_primes(lam) if q not in finite_T]
    split = all(jacobi(s, q) == 1 for q in outside for s in split_fields)
    report["odd primes split in F"] = PARTIAL if split else FAIL
    report["promising"] = FAIL if FAIL in report.values() else PARTIAL
    return report


def construct_promising(W_prime: Sequence[int], T: Iterable, ps: Sequence[int], split_fields: Sequence[int] = (),
                        search_bound: int = 10**6) -> int:
    """lambda = p_1...p_m * p_{m+1} with p_{m+1} fixing the local classes on T - W'."""
    T = _places(T)
    finite_T = set(_finite(T))
    for p in ps:
        if p in finite_T or any(jacobi(s, p) != 1 for s in split_fields):
            raise PreconditionViolated(f"{p} is in T or does not split in F")
    base = math.prod(ps)
    rest = [v for v in T if v.is_real or v.prime not in set(W_prime)]
    for q in primes_from(3):
        if q > search_bound:
            break
        if q in finite_T or q in ps:
            continue
        if all(jacobi(s, q) == 1 for s in split_fields) and _local_square_away(base * q, rest):
            return base * q
    raise SearchExhausted("no completing prime found")
