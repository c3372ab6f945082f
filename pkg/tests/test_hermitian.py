import pytest
from hypothesis import given, settings, strategies as st

from localglobal.arith import INF, Place, hilbert_symbol, symbol_support
from localglobal.errors import DomainError, IncoherentError
from localglobal.hermitian import (INERT, RAMIFIED, SPLIT, HermGlobalInvariants, HermSpace,
                                   ImagQuadField, herm_global_exists, herm_global_invariants,
                                   herm_local_class, place_splitting, realize_herm)

QI = ImagQuadField(1)


def hinv(K, n, neg, sig):
    return HermGlobalInvariants(K, n, frozenset(Place(p) for p in neg), sig)


def test_discriminants():
    assert QI.disc == -4 and ImagQuadField(3).disc == -3 and ImagQuadField(5).disc == -20
    with pytest.raises(DomainError):
        ImagQuadField(4)


@pytest.mark.parametrize("p, kind", [(5, SPLIT), (3, INERT), (2, RAMIFIED), (13, SPLIT), (7, INERT)])
def test_splitting_gaussian(p, kind):
    assert place_splitting(QI, p) == kind


def test_splitting_brute_force():
    # split iff x^2 + m has a root mod p (odd p not dividing the discriminant)
    for m in (1, 2, 3, 5, 7):
        K = ImagQuadField(m)
        for p in (3, 5, 7, 11, 13, 17, 19):
            if K.disc % p == 0:
                assert place_splitting(K, p) == RAMIFIED
                continue
            roots = any((x * x + m) % p == 0 for x in range(p))
            assert (place_splitting(K, p) == SPLIT) == roots


def test_local_class_examples():
    phi = HermSpace(QI, (3,))
    assert herm_local_class(phi, 3) == -1 and herm_local_class(phi, 5) == 1
    assert herm_global_invariants(phi) == hinv(QI, 1, {2, 3}, (1, 0))


def test_local_class_is_norm_test():
    # (a, disc)_p = 1 iff a is a norm from K_p: brute force over x^2 + y^2 mod 9 at p = 3
    for a in (1, 2, 5, 7, 3, 6):
        norms = {(x * x + y * y) % 27 for x in range(27) for y in range(27)
                 if (x % 3 or y % 3)}
        is_norm = any((a * t * t - n) % 27 == 0 for n in norms for t in (1, 2, 4, 5, 7, 8))
        if a % 3 == 0:
            continue
        assert (hilbert_symbol(a, QI.disc, 3) == 1) == is_norm


def test_split_places_never_negative():
    with pytest.raises(DomainError):
        hinv(QI, 1, {5}, (1, 0))


def test_realize_examples():
    phi = realize_herm(hinv(QI, 1, {2, 3}, (1, 0)))
    assert phi.coeffs == (3,)
    assert realize_herm(hinv(QI, 2, set(), (2, 0))).coeffs == (1, 1)


def test_incoherent_rejected():
    bad = hinv(QI, 1, {3}, (1, 0))
    assert not herm_global_exists(bad)
    with pytest.raises(IncoherentError):
        realize_herm(bad)


def test_json_roundtrip():
    i = hinv(QI, 2, {3}, (1, 1))
    assert HermGlobalInvariants.from_json(i.to_json()) == i
    phi = HermSpace(QI, (1, -3))
    assert HermSpace.from_json(phi.to_json()) == phi


@given(st.sampled_from([1, 2, 3, 5, 7, 11]), st.integers(1, 4), st.integers(0, 4),
       st.sets(st.sampled_from([2, 3, 5, 7, 11, 13])))
@settings(max_examples=80, deadline=None)
def test_realize_roundtrip(m, n, s, primes):
    K = ImagQuadField(m)
    s = min(s, n)
    neg = {p for p in primes if place_splitting(K, p) != SPLIT}
    if (len(neg) + s) % 2:
        extra = next(p for p in (3, 5, 7, 11, 13, 17, 19, 23) if place_splitting(K, p) == INERT)
        neg ^= {extra}
    inv = hinv(K, n, neg, (n - s, s))
    phi = realize_herm(inv)
    assert herm_global_invariants(phi) == inv
    prod = 1
    for v in symbol_support(phi.det, K.disc):
        prod *= herm_local_class(phi, v)
    assert prod == 1
