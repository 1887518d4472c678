"""GF(2) linear algebra on int bitsets (bit k = coordinate k)."""

from __future__ import annotations

from typing import Iterable, List


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def rref(rows: Iterable[int], n_cols: int) -> List[int]:
    """Reduced row echelon basis of the row span, pivots on the lowest bit.

    Rows are returned sorted by pivot column, so the output is canonical for
    the subspace.
    """
    work = [r for r in rows if r]
    basis: list[int] = []
    for col in range(n_cols):
        bit = 1 << col
        pivot = next((i for i, r in enumerate(work) if r & bit), None)
        if pivot is None:
            continue
        prow = work.pop(pivot)
        work = [r ^ prow if r & bit else r for r in work]
        basis = [b ^ prow if b & bit else b for b in basis]
        basis.append(prow)
        work = [r for r in work if r]
    return basis


def rank(rows: Iterable[int], n_cols: int) -> int:
    return len(rref(rows, n_cols))


def in_span(vec: int, rows: Iterable[int], n_cols: int) -> bool:
    basis = rref(rows, n_cols)
    for b in basis:
        low = b & -b
        if vec & low:
            vec ^= b
    return vec == 0


def kernel(rows: Iterable[int], n_cols: int) -> List[int]:
    """Basis of {x : parity(row & x) == 0 for every row}, in RREF."""
    basis = rref(rows, n_cols)
    pivots = {(b & -b).bit_length() - 1: b for b in basis}
    out = []
    for free in range(n_cols):
        if free in pivots:
            continue
        x = 1 << free
        for col, b in pivots.items():
            if (b >> free) & 1:
                x |= 1 << col
        out.append(x)
    return rref(out, n_cols)


def annihilator(rows: Iterable[int], n_cols: int) -> List[int]:
    """Functionals vanishing on the span of ``rows`` (same as the kernel)."""
    return kernel(rows, n_cols)


def intersect(a: Iterable[int], b: Iterable[int], n_cols: int) -> List[int]:
    """Intersection of two subspaces via annihilators."""
    ann = annihilator(a, n_cols) + annihilator(b, n_cols)
    return kernel(ann, n_cols)


def span_elements(basis: List[int]) -> List[int]:
    """All 2**len(basis) elements of the span."""
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return out


def bits(x: int, n: int) -> List[int]:
    return [(x >> k) & 1 for k in range(n)]


def from_bits(values: Iterable[int]) -> int:
    out = 0
    for k, v in enumerate(values):
        if v & 1:
            out |= 1 << k
    return out
