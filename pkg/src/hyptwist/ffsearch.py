"""Prescribing square classes of affine forms over finite fields and mod primes."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional, Sequence

from .arith import crt, is_prime, jacobi
from .errors import (
    ConflictingConstraint,
    InvalidParameters,
    NotFound,
    UnsatisfiableConstraint,
    VerificationFailed,
)
from .ffield import GF, field
from .places import weil_threshold

PRIME_POWER_LIMIT = 49


@dataclass(frozen=True)
class AffineFormFF:
    """alpha*X + beta over GF(q), elements in the field's integer encoding."""

    alpha: int
    beta: int

    def __call__(self, F: GF, x: int) -> int:
        return F.add(F.mul(self.alpha, x), self.beta)


def _field_for(q: int) -> GF:
    if not is_prime(q) and q > PRIME_POWER_LIMIT:
        raise InvalidParameters(f"prime powers are supported only up to {PRIME_POWER_LIMIT}")
    if q % 2 == 0:
        raise InvalidParameters("q must be odd")
    return field(q)


def _check_forms(F: GF, forms: Sequence[AffineFormFF], eps: Sequence[int]) -> None:
    if len(forms) != len(eps):
        raise InvalidParameters("forms and eps differ in length")
    for e in eps:
        if e % F.q == 0:
            raise InvalidParameters("eps entries must be nonzero")
    for f in forms:
        if f.alpha == 0:
            raise InvalidParameters("forms must be nonconstant")
    for a in range(len(forms)):
        for b in range(a + 1, len(forms)):
            fa, fb = forms[a], forms[b]
            if F.sub(F.mul(fa.alpha, fb.beta), F.mul(fb.alpha, fa.beta)) == 0:
                raise InvalidParameters(f"forms {a} and {b} are dependent")


def prescription_holds(F: GF, forms: Sequence[AffineFormFF], eps: Sequence[int], mu: int) -> bool:
    """L_i(mu) = eps_i * (nonzero square) for every i."""
    for f, e in zip(forms, eps):
        val = f(F, mu)
        if val == 0 or F.chi(val) != F.chi(e):
            return False
    return True


def _euler_check(p: int, forms: Sequence[AffineFormFF], eps: Sequence[int], mu: int) -> bool:
    # table-free recheck over a prime field via Euler's criterion
    for f, e in zip(forms, eps):
        v = (f.alpha * mu + f.beta) % p
        if v == 0 or pow(v, (p - 1) // 2, p) != pow(e % p, (p - 1) // 2, p):
            return False
    return True


def find_mu(q: int, forms: Sequence[AffineFormFF], eps: Sequence[int]) -> int:
    """Smallest mu (in encoding order) with L_i(mu) in eps_i * squares for all i."""
    F = _field_for(q)
    _check_forms(F, forms, eps)
    for mu in F.elements():
        if prescription_holds(F, forms, eps, mu):
            if F.k == 1 and not _euler_check(q, forms, eps, mu):
                raise VerificationFailed("find_mu output failed re-evaluation")
            return mu
    if q > weil_threshold(len(forms)):
        raise VerificationFailed(f"no solution above the proven threshold (q={q}, n={len(forms)})")
    raise NotFound(f"no mu over GF({q}) meets the prescription")


def positivity_count(q: int, forms: Sequence[AffineFormFF], eps: Sequence[int]) -> int:
    """sum over mu outside the zero set of prod_i (1 + chi(eps_i * L_i(mu)))."""
    F = _field_for(q)
    _check_forms(F, forms, eps)
    total = 0
    for mu in F.elements():
        vals = [f(F, mu) for f in forms]
        if any(v == 0 for v in vals):
            continue
        term = 1
        for v, e in zip(vals, eps):
            term *= 1 + F.chi(v) * F.chi(e)
            if term == 0:
                break
        total += term
    return total


# ------------------------------------------------------------ integer CRT


@dataclass(frozen=True)
class ResidueConstraint:
    """jacobi(a*mu + b, p) == target."""

    p: int
    a: int
    b: int
    target: int

    def holds(self, mu: int) -> bool:
        return jacobi(self.a * mu + self.b, self.p) == self.target


def _as_constraint(c) -> ResidueConstraint:
    if isinstance(c, ResidueConstraint):
        return c
    p, form, target = c
    a, b = form
    return ResidueConstraint(p, a, b, target)


def prescribe_residues(constraints: Sequence, extra: Sequence[tuple[int, int]] = ()) -> int:
    """A nonnegative mu meeting every residue-symbol and congruence demand.

    Each prime is solved independently by taking its smallest admissible
    residue; the residues are then combined by CRT, so mu is the least
    representative of that particular residue choice (not necessarily the
    least solution overall: [(5, X, +1), (7, X, -1)] gives 31, not 6).
    """
    cons = [_as_constraint(c) for c in constraints]
    by_prime: dict[int, list[ResidueConstraint]] = defaultdict(list)
    for c in cons:
        if c.p == 2 or not is_prime(c.p):
            raise InvalidParameters(f"{c.p} is not an odd prime")
        if c.target not in (1, -1):
            raise InvalidParameters("targets must be +1 or -1")
        if c.a % c.p == 0:
            raise InvalidParameters(f"form is constant mod {c.p}")
        for other in by_prime[c.p]:
            if (other.a - c.a) % c.p == 0 and (other.b - c.b) % c.p == 0:
                raise ConflictingConstraint(f"two forms coincide mod {c.p}")
        by_prime[c.p].append(c)
    residues = []
    for p in sorted(by_prime):
        r = next((r for r in range(p) if all(c.holds(r) for c in by_prime[p])), None)
        if r is None:
            raise UnsatisfiableConstraint(f"no residue mod {p} satisfies its constraints")
        residues.append((r, p))
    residues += [(r % m, m) for r, m in extra]
    mu = crt(residues) if residues else 0
    for c in cons:
        if not c.holds(mu):
            raise VerificationFailed("CRT output failed re-evaluation")
    return mu


# ---------------------------------------------- mu_0 / mu_1 prescriptions


def mu0_constraints(W: Sequence[int], g: int, rho: int, kappa: int, lam: int) -> list[ResidueConstraint]:
    """Residue symbols of rho^2*kappa*mu_0 + lambda at w_1..w_{4g^2+2g-1}."""
    n = 2 * g
    out = []
    for j, w in enumerate(W, start=1):
        if j <= n * n:
            target = 1 if (1 + (j - 1) // n - j) % n == 0 else -1
        else:
            target = -1
        out.append(ResidueConstraint(w, rho * rho * kappa, lam, target))
    return out


def m_form(a_k: int, rho: int, kappa: int, lam: int, mu0: int) -> tuple[int, int]:
    """M_k(X) = rho^2 kappa X - a_k rho^4 kappa^2 mu_0 - a_k rho^2 kappa lambda + 1."""
    r2k = rho * rho * kappa
    return r2k, -a_k * r2k * r2k * mu0 - a_k * r2k * lam + 1


def mu1_constraints(roots: Sequence[int], W: Sequence[int], rho: int, kappa: int, lam: int,
                    mu0: int) -> list[ResidueConstraint]:
    """Residue symbols of M_k(mu_1), dropping the form forced by each place's type."""
    n = len(roots) - 1
    g = n // 2
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            w = W[(i - 1) * n + j - 1]
            for k in range(1, n + 1):
                a, b = m_form(roots[k - 1], rho, kappa, lam, mu0)
                out.append(ResidueConstraint(w, a, b, -1 if i == k else 1))
    for j in range(1, n):
        w = W[4 * g * g + j - 1]
        for k in list(range(1, j + 1)) + list(range(j + 2, n + 2)):
            a, b = m_form(roots[k - 1], rho, kappa, lam, mu0)
            out.append(ResidueConstraint(w, a, b, -1 if k == n + 1 else 1))
    return out


def choose_mu0_mu1(roots: Sequence[int], W: Sequence[int], rho: int, kappa: int, lam: int,
                   extra: Optional[Sequence[tuple[int, int]]] = None) -> tuple[int, int]:
    g = (len(roots) - 1) // 2
    mu0 = prescribe_residues(mu0_constraints(W, g, rho, kappa, lam), extra or ())
    mu1 = prescribe_residues(mu1_constraints(roots, W, rho, kappa, lam, mu0), extra or ())
    return mu0, mu1
