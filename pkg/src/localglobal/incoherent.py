"""Incoherent definite orthogonal and Hermitian data over Q, their
neighbors, and restriction to codimension one.

Data is encoded by its finite deviation set: the finite places where the
local Hasse-Witt invariant (resp. norm class) is -1.  Definiteness at the
real place is implicit.
"""
from __future__ import annotations

from dataclasses import dataclass

from .arith import (INF, Place, Rational, as_place, as_rational, canonical_square_class,
                    hilbert_symbol, symbol_support)
from .errors import DomainError, PreconditionError
from .hermitian import (SPLIT, HermGlobalInvariants, HermSpace, ImagQuadField,
                        herm_global_exists, place_splitting, realize_herm)
from .quadratic import (GlobalQuadInvariants, QuadSpaceQ, global_exists, realize_global,
                        represents_locally)


def _places(vs) -> tuple[Place, ...]:
    return tuple(as_place(v) for v in vs)


@dataclass(frozen=True)
class IncoherentOrthData:
    dim: int
    det: int
    neg_places: tuple[Place, ...]

    def __post_init__(self):
        object.__setattr__(self, "neg_places", _places(self.neg_places))
        object.__setattr__(self, "det", int(as_rational(self.det)))

    @property
    def neg_set(self) -> frozenset[Place]:
        return frozenset(self.neg_places)

    def eps(self, v) -> int:
        return -1 if as_place(v) in self.neg_set else 1

    def support(self) -> frozenset[Place]:
        return symbol_support(self.det) | self.neg_set

    def to_json(self) -> dict:
        return {"dim": self.dim, "det": str(self.det),
                "neg_places": [str(v) for v in sorted(self.neg_set)]}

    @classmethod
    def from_json(cls, obj: dict) -> "IncoherentOrthData":
        return cls(int(obj["dim"]), int(as_rational(obj["det"])), _places(obj["neg_places"]))


@dataclass(frozen=True)
class IncoherentHermData:
    field: ImagQuadField
    dim: int
    neg_places: tuple[Place, ...]

    def __post_init__(self):
        object.__setattr__(self, "neg_places", _places(self.neg_places))

    @property
    def neg_set(self) -> frozenset[Place]:
        return frozenset(self.neg_places)

    def local_class(self, v) -> int:
        return -1 if as_place(v) in self.neg_set else 1

    def to_json(self) -> dict:
        return {"m": self.field.m, "dim": self.dim,
                "neg_places": [str(v) for v in sorted(self.neg_set)]}

    @classmethod
    def from_json(cls, obj: dict) -> "IncoherentHermData":
        return cls(ImagQuadField(int(obj["m"])), int(obj["dim"]), _places(obj["neg_places"]))


def _common_violations(neg_places) -> str | None:
    if not neg_places:
        return "neg_places is empty: the product of local invariants is +1"
    if len(set(neg_places)) != len(neg_places):
        return "neg_places lists a place twice"
    if INF in neg_places:
        return "the real place cannot be listed: the data is definite there"
    if len(neg_places) % 2 == 0:
        return "even number of places with invariant -1: the data is coherent"
    return None


def validate_orth(data: IncoherentOrthData) -> str | None:
    """None when the data is valid, otherwise the first violated clause."""
    if data.dim < 3:
        return f"dimension {data.dim} < 3"
    if data.det <= 0:
        return f"determinant {data.det} is not totally positive"
    if canonical_square_class(data.det) != data.det:
        return f"determinant {data.det} is not a squarefree representative"
    return _common_violations(data.neg_places)


def validate_herm(data: IncoherentHermData) -> str | None:
    if data.dim < 1:
        return f"dimension {data.dim} < 1"
    bad = _common_violations(data.neg_places)
    if bad:
        return bad
    for v in data.neg_places:
        if place_splitting(data.field, v) == SPLIT:
            return f"place {v} splits in {data.field}"
    return None


def _require(report: str | None):
    if report is not None:
        raise PreconditionError(f"invalid incoherent data: {report}")


# --------------------------------------------------------------- neighbors

def neighbor_invariants(data: IncoherentOrthData, v) -> GlobalQuadInvariants:
    _require(validate_orth(data))
    v = as_place(v)
    n = data.dim
    if v.is_infinite:
        inv = GlobalQuadInvariants(n, data.det, data.neg_set, (n - 2, 2))
    else:
        inv = GlobalQuadInvariants(n, data.det, data.neg_set ^ {v}, (n, 0))
    assert global_exists(inv)
    return inv


def neighbor_orth(data: IncoherentOrthData, v) -> tuple[GlobalQuadInvariants, QuadSpaceQ]:
    inv = neighbor_invariants(data, v)
    return inv, realize_global(inv)


def herm_neighbor_invariants(data: IncoherentHermData, v) -> HermGlobalInvariants:
    _require(validate_herm(data))
    v = as_place(v)
    if place_splitting(data.field, v) == SPLIT:
        raise PreconditionError(f"no neighbor at {v}: it splits in {data.field}")
    n = data.dim
    if v.is_infinite:
        inv = HermGlobalInvariants(data.field, n, data.neg_set, (n - 1, 1))
    else:
        inv = HermGlobalInvariants(data.field, n, data.neg_set ^ {v}, (n, 0))
    assert herm_global_exists(inv)
    return inv


def neighbor_herm(data: IncoherentHermData, v) -> tuple[HermGlobalInvariants, HermSpace]:
    inv = herm_neighbor_invariants(data, v)
    return inv, realize_herm(inv)


# ------------------------------------------------------------- restriction

def _restricted_neg(data: IncoherentOrthData, a: int) -> frozenset[Place]:
    da = data.det * a
    neg = set()
    for v in data.support() | symbol_support(a):
        if v.is_infinite:
            continue
        if data.eps(v) * hilbert_symbol(da, a, v) == -1:
            neg.add(v)
    return frozenset(neg)


def _positive_class(a: Rational) -> int:
    a = canonical_square_class(a)
    if a <= 0:
        raise PreconditionError(f"class {a} is not totally positive")
    return a


def representable_everywhere(data: IncoherentOrthData, a: Rational) -> bool:
    """Is a represented by every local space V_v of the data?"""
    a = _positive_class(a)
    if data.dim >= 4:
        return True
    # V(inf) agrees with V_v at every finite v
    _, w = neighbor_orth(data, INF)
    return all(represents_locally(w, a, v)
               for v in data.support() | symbol_support(a) if not v.is_infinite)


def restrict_orth(data: IncoherentOrthData, a: Rational) -> IncoherentOrthData:
    """The data {U_v} with V_v = U_v + <a>."""
    _require(validate_orth(data))
    a = _positive_class(a)
    if data.dim == 3:
        if not representable_everywhere(data, a):
            raise PreconditionError(f"{a} is not represented where V_v is anisotropic")
        raise PreconditionError("restriction of 3-dimensional data has dimension 2; "
                                "use restrict_orth_rank2 for the Hermitian form of the result")
    out = IncoherentOrthData(data.dim - 1, canonical_square_class(data.det * a),
                             tuple(sorted(_restricted_neg(data, a))))
    _require(validate_orth(out))
    return out


def restrict_orth_rank2(data: IncoherentOrthData, a: Rational) -> IncoherentHermData:
    """Restriction of 3-dimensional data, read as 1-dimensional Hermitian data.

    A plane of determinant e is K = Q(sqrt(-e)) with a scaled norm form, and
    its Hasse-Witt invariant is the norm class of the scaling.
    """
    _require(validate_orth(data))
    a = _positive_class(a)
    if data.dim != 3:
        raise PreconditionError("only 3-dimensional data restricts to rank 2")
    if not representable_everywhere(data, a):
        raise PreconditionError(f"{a} is not represented where V_v is anisotropic")
    e = canonical_square_class(data.det * a)
    out = IncoherentHermData(ImagQuadField(e), 1, tuple(sorted(_restricted_neg(data, a))))
    _require(validate_herm(out))
    return out


def restrict_herm(data: IncoherentHermData, a: Rational) -> IncoherentHermData:
    _require(validate_herm(data))
    a = as_rational(a)
    if a <= 0:
        raise PreconditionError("a must be totally positive")
    if data.dim < 2:
        raise PreconditionError("Hermitian restriction needs dim >= 2")
    disc = data.field.disc
    flips = {v for v in symbol_support(a, disc)
             if not v.is_infinite and hilbert_symbol(a, disc, v) == -1}
    out = IncoherentHermData(data.field, data.dim - 1, tuple(sorted(data.neg_set ^ flips)))
    _require(validate_herm(out))
    return out


def complement_class(big: IncoherentOrthData, small: IncoherentOrthData) -> int:
    """The class a = d(V)/d(U) of the orthogonal line."""
    return canonical_square_class(big.det * small.det)


def add_line(inv: GlobalQuadInvariants, a: Rational) -> GlobalQuadInvariants:
    """Invariants of V + <a>."""
    a = as_rational(a)
    neg = frozenset(v for v in inv.support() | symbol_support(a)
                    if not v.is_infinite and inv.eps(v) * hilbert_symbol(inv.det, a, v) == -1)
    r, s = inv.signature
    return GlobalQuadInvariants(inv.dim + 1, canonical_square_class(inv.det * a), neg,
                                (r + 1, s) if a > 0 else (r, s + 1))


def check_neighbor_sum(data: IncoherentOrthData, v, a: Rational) -> bool:
    """U(v) + <a> has the invariants of V(v), U being the restriction by a."""
    small = restrict_orth(data, a)
    return add_line(neighbor_invariants(small, v), a) == neighbor_invariants(data, v)
