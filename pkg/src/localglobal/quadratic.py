"""Diagonal quadratic spaces over Q and their local invariants.

A space is stored as its diagonal coefficients <a_1, ..., a_n>.  Local
data at the real place is always derived from the signature.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import primerange

from .arith import (INF, Place, Rational, as_place, as_rational, canonical_square_class,
                    fmt_rational, hilbert_symbol, is_local_square, prime_divisors,
                    symbol_support)
from .errors import DomainError, IncoherentError, PreconditionError, SearchExhausted

# largest |b| tried by the auxiliary-prime stage of the quaternion search
SEARCH_HEIGHT = 10 ** 6


@dataclass(frozen=True)
class QuadSpaceQ:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(as_rational(c) for c in self.coeffs)
        if not cs:
            raise DomainError("a quadratic space needs at least one coefficient")
        if any(c == 0 for c in cs):
            raise DomainError("degenerate form: zero coefficient")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def of(cls, *coeffs: Rational) -> "QuadSpaceQ":
        return cls(tuple(coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def det(self) -> int:
        d = Fraction(1)
        for c in self.coeffs:
            d *= c
        return canonical_square_class(d)

    @property
    def signature(self) -> tuple[int, int]:
        s = sum(1 for c in self.coeffs if c < 0)
        return self.dim - s, s

    def support(self) -> frozenset[Place]:
        return symbol_support(*self.coeffs)

    def __add__(self, other: "QuadSpaceQ") -> "QuadSpaceQ":
        return QuadSpaceQ(self.coeffs + other.coeffs)

    def scaled(self, c: Rational) -> "QuadSpaceQ":
        c = as_rational(c)
        return QuadSpaceQ(tuple(c * a for a in self.coeffs))

    def to_json(self) -> dict:
        return {"coeffs": [fmt_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadSpaceQ":
        return cls(tuple(obj["coeffs"]))


@dataclass(frozen=True)
class LocalQuadInvariants:
    dim: int
    det: int
    eps: int
    signature: tuple[int, int] | None = None

    def to_json(self) -> dict:
        return {"dim": self.dim, "det": str(self.det), "eps": self.eps,
                "signature": None if self.signature is None else list(self.signature)}


def _eps_of_signature(s: int) -> int:
    return -1 if (s * (s - 1) // 2) % 2 else 1


def _parse_places(vs) -> frozenset[Place]:
    return frozenset(as_place(v) for v in vs)


@dataclass(frozen=True)
class GlobalQuadInvariants:
    """dim, det class, the finite places with eps = -1, and the signature.

    The real place is never stored in ``neg_places``; its Hasse-Witt
    invariant follows from the signature.  An ``inf`` entry on input is
    accepted when it agrees with the signature and dropped.
    """

    dim: int
    det: int
    neg_places: frozenset[Place]
    signature: tuple[int, int]

    def __post_init__(self):
        neg = _parse_places(self.neg_places)
        r, s = self.signature
        object.__setattr__(self, "signature", (int(r), int(s)))
        if self.dim < 1:
            raise DomainError("dimension must be positive")
        if r < 0 or s < 0 or r + s != self.dim:
            raise DomainError(f"signature {self.signature} does not match dimension {self.dim}")
        det = canonical_square_class(self.det)
        if det != self.det:
            object.__setattr__(self, "det", det)
        if (det < 0) != (s % 2 == 1):
            raise DomainError(f"det sign of {det} inconsistent with signature ({r},{s})")
        if INF in neg:
            if _eps_of_signature(s) != -1:
                raise DomainError("inf listed in neg_places but the signature gives eps_inf = +1")
            neg = neg - {INF}
        object.__setattr__(self, "neg_places", frozenset(neg))

    def eps(self, v) -> int:
        v = as_place(v)
        if v.is_infinite:
            return _eps_of_signature(self.signature[1])
        return -1 if v in self.neg_places else 1

    def all_neg_places(self) -> frozenset[Place]:
        """neg_places together with inf when the signature forces eps_inf = -1."""
        if self.eps(INF) == -1:
            return self.neg_places | {INF}
        return self.neg_places

    def support(self) -> frozenset[Place]:
        return symbol_support(self.det) | self.neg_places

    def local(self, v) -> LocalQuadInvariants:
        v = as_place(v)
        return LocalQuadInvariants(self.dim, self.det, self.eps(v),
                                   self.signature if v.is_infinite else None)

    def to_json(self) -> dict:
        return {"dim": self.dim, "det": str(self.det),
                "neg_places": [str(v) for v in sorted(self.neg_places)],
                "signature": list(self.signature)}

    @classmethod
    def from_json(cls, obj: dict) -> "GlobalQuadInvariants":
        return cls(int(obj["dim"]), canonical_square_class(obj["det"]),
                   _parse_places(obj.get("neg_places", ())), tuple(obj["signature"]))


# ------------------------------------------------------------- invariants

def hasse_invariant(coeffs: Sequence[Rational], v) -> int:
    v = as_place(v)
    e = 1
    for a, b in itertools.combinations(coeffs, 2):
        e *= hilbert_symbol(a, b, v)
    return e


def local_invariants(V: QuadSpaceQ, v) -> LocalQuadInvariants:
    v = as_place(v)
    return LocalQuadInvariants(V.dim, V.det, hasse_invariant(V.coeffs, v),
                               V.signature if v.is_infinite else None)


def global_invariants(V: QuadSpaceQ) -> GlobalQuadInvariants:
    neg = frozenset(v for v in V.support()
                    if not v.is_infinite and hasse_invariant(V.coeffs, v) == -1)
    return GlobalQuadInvariants(V.dim, V.det, neg, V.signature)


def locally_isomorphic(V: QuadSpaceQ, W: QuadSpaceQ, v) -> bool:
    return local_invariants(V, v) == local_invariants(W, v)


def isometric(V: QuadSpaceQ, W: QuadSpaceQ) -> bool:
    """Global isometry, decided place by place (Hasse-Minkowski)."""
    return all(locally_isomorphic(V, W, v) for v in V.support() | W.support())


def direct_sum_eps(eps1: int, det1: Rational, eps2: int, det2: Rational, v) -> int:
    """Hasse-Witt invariant of an orthogonal sum."""
    return eps1 * eps2 * hilbert_symbol(det1, det2, v)


def diagonalize(gram: Sequence[Sequence[Rational]]) -> QuadSpaceQ:
    """Diagonal form of q(x) = x^T G x for a symmetric nonsingular G."""
    m = [[as_rational(x) for x in row] for row in gram]
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise DomainError("Gram matrix must be square and nonempty")
    if any(m[i][j] != m[j][i] for i in range(n) for j in range(i)):
        raise DomainError("Gram matrix is not symmetric")
    idx = list(range(n))
    out = []
    while idx:
        piv = next((i for i in idx if m[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and m[i][j] != 0), None)
            if pair is None:
                raise DomainError("singular Gram matrix")
            i, j = pair
            # e_i <- e_i + e_j gives q(e_i) = 2 b(e_i, e_j) != 0
            for k in idx:
                m[i][k] += m[j][k]
            for k in idx:
                m[k][i] += m[k][j]
            piv = i
        a = m[piv][piv]
        out.append(a)
        rest = [i for i in idx if i != piv]
        for i in rest:
            f = m[i][piv] / a
            if f:
                for j in rest:
                    m[i][j] -= f * m[piv][j]
        idx = rest
    return QuadSpaceQ(tuple(out))


# ----------------------------------------------------- local representation

def local_isotropic(dim: int, det: Rational, eps: int, v) -> bool:
    """Isotropy over Q_v (v finite) of the space with the given invariants."""
    v = as_place(v)
    if v.is_infinite:
        raise PreconditionError("use the signature at the real place")
    if dim <= 1:
        return False
    if dim == 2:
        return is_local_square(-as_rational(det), v.p)
    if dim == 3:
        return hilbert_symbol(-1, -as_rational(det), v) == eps
    if dim == 4:
        return not is_local_square(det, v.p) or eps == hilbert_symbol(-1, -1, v)
    return True


def local_represents(dim: int, det: Rational, eps: int, c: Rational, v) -> bool:
    """Does the local space (dim, det, eps) at finite v represent c?"""
    c = as_rational(c)
    det = as_rational(det)
    # q represents c iff q + <-c> is isotropic
    return local_isotropic(dim + 1, -det * c, eps * hilbert_symbol(det, -c, v), v)


def represents_locally(V: QuadSpaceQ, c: Rational, v) -> bool:
    c = as_rational(c)
    if c == 0:
        raise DomainError("representation of zero is not asked")
    v = as_place(v)
    if v.is_infinite:
        r, s = V.signature
        return r > 0 if c > 0 else s > 0
    inv = local_invariants(V, v)
    return local_represents(inv.dim, inv.det, inv.eps, c, v)


# ------------------------------------------------------------ construction

def quaternion_trace_zero(a: Rational, b: Rational) -> QuadSpaceQ:
    """Norm form on trace-zero quaternions of (a, b): <-a, -b, ab>."""
    a = as_rational(a)
    b = as_rational(b)
    if a == 0 or b == 0:
        raise DomainError("quaternion algebra parameters must be nonzero")
    return QuadSpaceQ((-a, -b, a * b))


def global_exists(inv: GlobalQuadInvariants) -> bool:
    if len(inv.all_neg_places()) % 2:
        return False
    if inv.dim >= 3:
        return True
    # low rank: every local space must exist as well
    for v in inv.neg_places:
        if inv.dim == 1 or is_local_square(-inv.det, v.p):
            return False
    if inv.dim == 1 and inv.eps(INF) == -1:
        return False
    return True


def _quaternion_ok(a: int, b: int, ram: frozenset[Place]) -> bool:
    for v in ram:
        if hilbert_symbol(a, b, v) != -1:
            return False
    return all(hilbert_symbol(a, b, v) == 1 for v in symbol_support(a, b) - ram)


def quaternion_pair(ram: Iterable) -> tuple[int, int]:
    """Integers (a, b) whose quaternion algebra ramifies exactly at ``ram``.

    Small candidates are tried first; then a in {+-m, +-2m} (m the product of
    the odd ramified primes) against auxiliary primes b = +-q.
    """
    ram = _parse_places(ram)
    if len(ram) % 2:
        raise IncoherentError("a quaternion algebra ramifies at an even number of places")
    odd = sorted(v.p for v in ram if not v.is_infinite and v.p != 2)
    m = 1
    for q in odd:
        m *= q
    small = {1, 2, m, 2 * m} | set(odd)
    cands = sorted({s * c for c in small for s in (1, -1)}, key=lambda c: (abs(c), c > 0))
    pairs = sorted(itertools.product(cands, repeat=2),
                   key=lambda ab: (abs(ab[0] * ab[1]), abs(ab[0]), ab[0] > 0, ab[1] > 0))
    for a, b in pairs:
        if _quaternion_ok(a, b, ram):
            return a, b
    heads = [c for c in cands if abs(c) in (m, 2 * m)]
    for q in primerange(3, SEARCH_HEIGHT):
        if m % q == 0:
            continue
        for a in heads:
            for b in (q, -q):
                if _quaternion_ok(a, b, ram):
                    return a, b
    raise SearchExhausted(f"no quaternion algebra found for ramification {sorted(ram)}")


def realize_global(inv: GlobalQuadInvariants) -> QuadSpaceQ:
    """A diagonal space over Q with exactly the invariants ``inv``.

    <1,...,1,-1,...,-1> + d_T * <-a, -b, ab>: the ternary block carries the
    determinant and the Hasse-Witt pattern; the result is re-verified.
    """
    if inv.dim < 3:
        raise PreconditionError("realization is implemented for dim >= 3")
    if not global_exists(inv):
        raise IncoherentError("the product of the local Hasse-Witt invariants is -1")
    n = inv.dim
    r, s = inv.signature
    s_t = min(s, 3)
    s_a = s - s_t
    prefix = [Fraction(1)] * (n - 3 - s_a) + [Fraction(-1)] * s_a
    det_a = -1 if s_a % 2 else 1
    d_t = canonical_square_class(inv.det * det_a)
    eps_a_twist = (s_a * (s_a - 1) // 2) % 2

    places = inv.support() | symbol_support(d_t)
    ram = set()
    for v in places:
        eps_a = hilbert_symbol(-1, -1, v) if eps_a_twist else 1
        eps_t = inv.eps(v) * eps_a * hilbert_symbol(det_a, d_t, v)
        if eps_t * hilbert_symbol(d_t, -1, v) * hilbert_symbol(-1, -1, v) == -1:
            ram.add(v)
    a, b = quaternion_pair(ram)
    ternary = sorted(quaternion_trace_zero(a, b).scaled(d_t).coeffs,
                     key=lambda c: (abs(c), c < 0))
    out = QuadSpaceQ(tuple(prefix + ternary))
    if global_invariants(out) != inv:
        raise SearchExhausted("internal: realized space failed verification")
    return out
