from __future__ import annotations

import math

import pytest
from hypothesis import given

from conftest import curves
from hyptwist.arith import factorize, small_primes, valuation
from hyptwist.curve import Curve
from hyptwist.places import (
    GOOD,
    MULTIPLICATIVE,
    OTHER_BAD,
    GenericityWitness,
    classify_prime,
    genericity_deficiencies,
    genericity_scan,
    slot_demand,
    weil_threshold,
    yelton_hypothesis,
)


def brute_types(C):
    """Odd multiplicative primes by type, from raw valuations of all differences."""
    n = C.degree
    disc = math.prod(abs(C.diff(i, j)) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    out = {}
    for p in factorize(disc).primes():
        if p == 2:
            continue
        hits = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if C.diff(i, j) % p == 0]
        if len(hits) == 1 and valuation(C.diff(*hits[0]), p) == 1:
            out.setdefault(hits[0], []).append(p)
    return out


def test_classify_examples():
    C = Curve((0, 1, 3))
    assert str(classify_prime(C, 3)) == "Multiplicative[1, 3]"
    assert classify_prime(C, 5).kind == GOOD
    assert classify_prime(C, 2).kind == OTHER_BAD
    assert classify_prime(Curve((0, 9, 1)), 3).kind == OTHER_BAD


@given(curves())
def test_classification_matches_brute_force(C):
    types = brute_types(C)
    for p in sorted(C.bad_support):
        pc = classify_prime(C, p)
        expected = [ty for ty, ps in types.items() if p in ps]
        if expected:
            assert pc.kind == MULTIPLICATIVE and pc.pair == expected[0]
        else:
            assert pc.kind == OTHER_BAD


def test_scan_examples():
    w = genericity_scan(Curve((105, 2431, 0)), 3)
    assert w.W == (3, 11, 5, 13, 1163) and w.Wprime == (7, 17)
    assert w.validate(Curve((105, 2431, 0)))
    assert w.yelton_hypothesis
    assert genericity_scan(Curve((0, 1, 3)), 2) is None
    assert genericity_scan(Curve((0, 1, 2, 3, 4)), 2) is None


def test_tampered_witness_fails_validation():
    C = Curve((105, 2431, 0))
    w = genericity_scan(C, 3)
    assert not GenericityWitness((11, 3, 5, 13, 1163), w.Wprime, 3).validate(C)
    assert not GenericityWitness(w.W, (7, 7), 3).validate(C)
    assert not GenericityWitness(w.W, w.Wprime, 5).validate(C)


def test_deficiency_explanation_recounts():
    C = Curve((0, 1, 3))
    defs = genericity_deficiencies(C, 2)
    types = brute_types(C)
    demand = slot_demand(1)
    assert demand == {(1, 2): 1, (1, 3): 3, (2, 3): 3}
    assert {d.pair for d in defs} == {ty for ty, k in demand.items() if len(types.get(ty, [])) < k}
    d13 = next(d for d in defs if d.pair == (1, 3))
    assert d13.needed == 3 and d13.available == (3,)
    assert "needs 3" in str(d13)


@given(curves(max_genus=2, bound=400))
def test_scan_none_iff_deficient(C):
    for B in (2, 10):
        w = genericity_scan(C, B)
        assert (w is None) == bool(genericity_deficiencies(C, B))
        if w is not None:
            assert w.validate(C)


def test_yelton_hypothesis():
    assert yelton_hypothesis(Curve((105, 2431, 0)))
    assert not yelton_hypothesis(Curve((0, 1, 2, 3, 4)))


def test_weil_threshold_values():
    assert weil_threshold(1) == 2
    assert weil_threshold(2) == 9
    for n in range(1, 8):
        assert weil_threshold(n) < weil_threshold(n + 1)
    with pytest.raises(ValueError):
        weil_threshold(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_weil_threshold_is_sharp_for_its_inequality(n):
    q0 = weil_threshold(n)
    c = n * 2 ** (n - 1) - 2**n + 1
    k = n + n * 2 ** (n - 1)
    assert not q0 - k - c * math.sqrt(q0) > 0
    for q in range(q0 + 1, q0 + 200):
        assert q - k - c * math.sqrt(q) > 0


def test_n1_find_mu_always_succeeds_above_threshold():
    from hyptwist.ffsearch import AffineFormFF, find_mu

    for q in small_primes(200)[1:]:
        for a in range(1, q, max(1, q // 5)):
            for e in (1, next(x for x in range(2, q) if pow(x, (q - 1) // 2, q) == q - 1)):
                find_mu(q, [AffineFormFF(a, 1)], [e])
