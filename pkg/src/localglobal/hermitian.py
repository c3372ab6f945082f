"""Hermitian spaces over an imaginary quadratic field K = Q(sqrt(-m)).

Local invariant at a place v: the Hilbert symbol (det, disc_K)_v, which is
+1 exactly when the determinant is a local norm.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from sympy import primerange

from .arith import (INF, Place, Rational, as_place, as_rational, canonical_square_class,
                    fmt_rational, hilbert_symbol, is_local_square, prime_divisors,
                    symbol_support)
from .errors import DomainError, IncoherentError, SearchExhausted

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"

# auxiliary split primes used to adjust symbols at ramified places
AUX_PRIME_BOUND = 100


@dataclass(frozen=True)
class ImagQuadField:
    m: int

    def __post_init__(self):
        if self.m < 1 or canonical_square_class(self.m) != self.m:
            raise DomainError(f"m = {self.m} must be a positive squarefree integer")

    @property
    def disc(self) -> int:
        return -self.m if (-self.m) % 4 == 1 else -4 * self.m

    def __str__(self):
        return f"Q(sqrt(-{self.m}))"


def place_splitting(K: ImagQuadField, v) -> str:
    v = as_place(v)
    if v.is_infinite:
        return INERT
    if K.disc % v.p == 0:
        return RAMIFIED
    return SPLIT if is_local_square(K.disc, v.p) else INERT


@dataclass(frozen=True)
class HermSpace:
    """Diagonal Hermitian form sum d_i x_i conj(y_i); the d_i are rational."""

    field: ImagQuadField
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(as_rational(c) for c in self.coeffs)
        if not cs or any(c == 0 for c in cs):
            raise DomainError("Hermitian form needs nonzero diagonal entries")
        object.__setattr__(self, "coeffs", cs)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def det(self) -> Fraction:
        d = Fraction(1)
        for c in self.coeffs:
            d *= c
        return d

    @property
    def signature(self) -> tuple[int, int]:
        s = sum(1 for c in self.coeffs if c < 0)
        return self.dim - s, s

    def to_json(self) -> dict:
        return {"m": self.field.m, "coeffs": [fmt_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "HermSpace":
        return cls(ImagQuadField(int(obj["m"])), tuple(obj["coeffs"]))


def herm_local_class(phi: HermSpace, v) -> int:
    return hilbert_symbol(phi.det, phi.field.disc, v)


@dataclass(frozen=True)
class HermGlobalInvariants:
    """The finite non-norm places; inf is implied by an odd ``s``."""

    field: ImagQuadField
    dim: int
    neg_places: frozenset[Place]
    signature: tuple[int, int]

    def __post_init__(self):
        neg = frozenset(as_place(v) for v in self.neg_places)
        r, s = (int(x) for x in self.signature)
        object.__setattr__(self, "signature", (r, s))
        if self.dim < 1 or r < 0 or s < 0 or r + s != self.dim:
            raise DomainError(f"bad dimension/signature {self.dim}, ({r},{s})")
        if INF in neg:
            if s % 2 == 0:
                raise DomainError("inf listed as a non-norm place but s is even")
            neg = neg - {INF}
        for v in neg:
            if place_splitting(self.field, v) == SPLIT:
                raise DomainError(f"{v} splits in {self.field}: every class is a norm there")
        object.__setattr__(self, "neg_places", neg)

    def local_class(self, v) -> int:
        v = as_place(v)
        if v.is_infinite:
            return -1 if self.signature[1] % 2 else 1
        return -1 if v in self.neg_places else 1

    def all_neg_places(self) -> frozenset[Place]:
        if self.signature[1] % 2:
            return self.neg_places | {INF}
        return self.neg_places

    def to_json(self) -> dict:
        return {"m": self.field.m, "dim": self.dim,
                "neg_places": [str(v) for v in sorted(self.neg_places)],
                "signature": list(self.signature)}

    @classmethod
    def from_json(cls, obj: dict) -> "HermGlobalInvariants":
        return cls(ImagQuadField(int(obj["m"])), int(obj["dim"]),
                   frozenset(as_place(v) for v in obj.get("neg_places", ())),
                   tuple(obj["signature"]))


def herm_global_invariants(phi: HermSpace) -> HermGlobalInvariants:
    neg = frozenset(v for v in symbol_support(phi.det, phi.field.disc)
                    if not v.is_infinite and herm_local_class(phi, v) == -1)
    return HermGlobalInvariants(phi.field, phi.dim, neg, phi.signature)


def herm_global_exists(inv: HermGlobalInvariants) -> bool:
    return len(inv.all_neg_places()) % 2 == 0


def _det_candidates(inv: HermGlobalInvariants):
    K = inv.field
    base = sorted({v.p for v in inv.neg_places} | set(prime_divisors(K.disc)))
    aux = [1] + [q for q in primerange(2, AUX_PRIME_BOUND)
                 if q not in base and place_splitting(K, q) == SPLIT]
    prods = set()
    for k in range(len(base) + 1):
        for sub in itertools.combinations(base, k):
            x = 1
            for q in sub:
                x *= q
            prods.update(x * t for t in aux)
    sign = -1 if inv.signature[1] % 2 else 1
    return [sign * x for x in sorted(prods)]


def realize_herm(inv: HermGlobalInvariants) -> HermSpace:
    """Diagonal <1, ..., 1, -1, ..., -1, delta> with verified local classes."""
    if not herm_global_exists(inv):
        raise IncoherentError("odd number of non-norm places")
    K = inv.field
    want = inv.all_neg_places()
    n = inv.dim
    r, s = inv.signature
    k = s - 1 if s else 0
    for delta in _det_candidates(inv):
        places = symbol_support(delta, K.disc) | want
        if all((hilbert_symbol(delta, K.disc, v) == -1) == (v in want) for v in places):
            last = Fraction(delta * (-1) ** k)
            out = HermSpace(K, tuple([Fraction(1)] * (n - 1 - k) + [Fraction(-1)] * k + [last]))
            if herm_global_invariants(out) != inv:
                raise SearchExhausted("internal: realized Hermitian space failed verification")
            return out
    raise SearchExhausted(f"no determinant found for non-norm set {sorted(want)}")
