"""Places of Q, square classes, Hilbert symbols and truncated p-adic numbers.

Square classes are plain ints: the signed squarefree representative of
``r * Q*^2``.  Everything here is immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from sympy import factorint, isprime, sqrt_mod

from .errors import DomainError, PrecisionError, PreconditionError

DEFAULT_PRECISION = 8

Rational = Union[int, Fraction, str]


# ---------------------------------------------------------------- rationals

def as_rational(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise ValueError(f"not a rational: {x!r}") from None
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fmt_rational(r: Rational) -> str:
    r = as_rational(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


@lru_cache(maxsize=65536)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


def prime_divisors(r: Rational) -> list[int]:
    r = as_rational(r)
    ps = {q for q, _ in _factor(abs(r.numerator))}
    ps |= {q for q, _ in _factor(r.denominator)}
    return sorted(ps)


def valuation(r: Rational, p: int) -> int:
    r = as_rational(r)
    if r == 0:
        raise DomainError("valuation of zero")
    v = 0
    num, den = r.numerator, r.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ------------------------------------------------------------------ places

@dataclass(frozen=True, order=True)
class Place:
    """A place of Q.  ``p == 0`` encodes the real place."""

    p: int

    def __post_init__(self):
        if self.p != 0 and not (self.p > 1 and isprime(self.p)):
            raise DomainError(f"{self.p} is not a prime")

    @property
    def is_infinite(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "inf" if self.p == 0 else str(self.p)

    def __repr__(self) -> str:
        return f"Place({self})"


INF = Place(0)


def as_place(v) -> Place:
    if isinstance(v, Place):
        return v
    if v is None:
        return INF
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "infinity", "oo", "∞", "r", "real"):
            return INF
        try:
            v = int(s)
        except ValueError:
            raise DomainError(f"not a place: {v!r}") from None
    if isinstance(v, int) and not isinstance(v, bool):
        if v <= 1:
            raise DomainError(f"not a place: {v!r}")
        return Place(v)
    raise DomainError(f"not a place: {v!r}")


def places(vs: Iterable) -> frozenset[Place]:
    return frozenset(as_place(v) for v in vs)


# ------------------------------------------------------------ square classes

@lru_cache(maxsize=65536)
def _squarefree_int(n: int) -> int:
    s = -1 if n < 0 else 1
    out = 1
    for q, e in _factor(abs(n)):
        if e % 2:
            out *= q
    return s * out


def canonical_square_class(r: Rational) -> int:
    """Signed squarefree integer s with r/s a rational square."""
    r = as_rational(r)
    if r == 0:
        raise DomainError("zero has no square class")
    return _squarefree_int(r.numerator * r.denominator)


def is_square_class_rep(s: int) -> bool:
    return s != 0 and canonical_square_class(s) == s


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p; 0 when p | a."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _unit_rational_legendre(u: Fraction, p: int) -> int:
    return legendre(u.numerator * u.denominator, p)


def is_local_square(r: Rational, p: int) -> bool:
    """True when r is a square in Q_p (p prime) or R (p = 0)."""
    r = as_rational(r)
    if r == 0:
        return True
    if p == 0:
        return r > 0
    s = canonical_square_class(r)
    v = 1 if s % p == 0 else 0
    if v:
        return False
    if p == 2:
        return s % 8 == 1
    return legendre(s, p) == 1


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    if p == 2:
        raise PreconditionError("no quadratic nonresidue theory at p = 2")
    if not isprime(p):
        raise DomainError(f"{p} is not a prime")
    d = 2
    while legendre(d, p) != -1:
        d += 1
    return d


def unit_square_class(u: Rational, p: int) -> int:
    """Representative 1 or D of a p-adic unit's class, p odd."""
    u = as_rational(u)
    if valuation(u, p) % 2:
        raise PreconditionError(f"{fmt_rational(u)} is not a unit class at {p}")
    # even valuation: the squarefree representative is prime to p
    return 1 if legendre(canonical_square_class(u), p) == 1 else smallest_nonresidue(p)


# ---------------------------------------------------------------- symbols

def _split(s: int, p: int) -> tuple[int, int]:
    if s % p == 0:
        return 1, s // p
    return 0, s


def hilbert_symbol(a: Rational, b: Rational, v) -> int:
    """(a, b)_v in {+1, -1}."""
    a = as_rational(a)
    b = as_rational(b)
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol of zero")
    v = as_place(v)
    if v.is_infinite:
        return -1 if (a < 0 and b < 0) else 1
    p = v.p
    alpha, u = _split(canonical_square_class(a), p)
    beta, w = _split(canonical_square_class(b), p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2

        e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta:
        sign *= legendre(u, p)
    if alpha:
        sign *= legendre(w, p)
    return sign


def symbol_support(*rs: Rational) -> frozenset[Place]:
    """Places where a Hilbert symbol of the arguments may be nontrivial."""
    out = {INF, Place(2)}
    for r in rs:
        out.update(Place(q) for q in prime_divisors(r))
    return frozenset(out)


# ---------------------------------------------------------- p-adic numbers

@dataclass(frozen=True)
class PadicNum:
    """p^val * unit with ``prec`` significant digits.

    A zero has ``unit == 0`` and ``prec == 0``; ``val`` then holds its
    absolute precision, or None for an exact zero.
    """

    p: int
    val: int | None
    unit: int
    prec: int

    def __post_init__(self):
        if self.unit == 0:
            if self.prec != 0:
                raise DomainError("zero carries no significant digits")
            return
        if self.prec < 1:
            raise PrecisionError("nonzero p-adic number needs precision >= 1")
        if self.unit % self.p == 0:
            raise DomainError("unit part divisible by p")
        if not 0 < self.unit < self.p ** self.prec:
            object.__setattr__(self, "unit", self.unit % self.p ** self.prec)

    @classmethod
    def zero(cls, p: int, absprec: int | None = None) -> "PadicNum":
        return cls(p, absprec, 0, 0)

    @classmethod
    def from_rational(cls, r: Rational, p: int, prec: int = DEFAULT_PRECISION) -> "PadicNum":
        r = as_rational(r)
        if r == 0:
            return cls.zero(p)
        v = valuation(r, p)
        u = r / Fraction(p) ** v
        mod = p ** prec
        unit = u.numerator * pow(u.denominator, -1, mod) % mod
        return cls(p, v, unit, prec)

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.val is None

    @property
    def abs_prec(self) -> float:
        if self.unit == 0:
            return float("inf") if self.val is None else self.val
        return self.val + self.prec

    @property
    def valuation(self) -> float:
        """Valuation; for a zero, its absolute precision (inf if exact)."""
        if self.unit == 0:
            return float("inf") if self.val is None else self.val
        return self.val

    def lift(self) -> Fraction:
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def _from_lift(self, r: Fraction, absprec) -> "PadicNum":
        p = self.p
        if absprec == float("inf"):
            if r == 0:
                return PadicNum.zero(p)
            raise PrecisionError("exact result requested from inexact data")
        absprec = int(absprec)
        if r == 0 or valuation(r, p) >= absprec:
            return PadicNum.zero(p, absprec)
        v = valuation(r, p)
        return PadicNum.from_rational(r, p, absprec - v)

    def _check(self, other: "PadicNum"):
        if self.p != other.p:
            raise DomainError("p-adic numbers over different primes")

    def __add__(self, other: "PadicNum") -> "PadicNum":
        self._check(other)
        if self.is_exact_zero:
            return other
        if other.is_exact_zero:
            return self
        return self._from_lift(self.lift() + other.lift(), min(self.abs_prec, other.abs_prec))

    def __neg__(self) -> "PadicNum":
        if self.unit == 0:
            return self
        return PadicNum(self.p, self.val, self.p ** self.prec - self.unit, self.prec)

    def __sub__(self, other: "PadicNum") -> "PadicNum":
        return self + (-other)

    def __mul__(self, other: "PadicNum") -> "PadicNum":
        self._check(other)
        if self.is_exact_zero or other.is_exact_zero:
            return PadicNum.zero(self.p)
        if self.unit == 0 or other.unit == 0:
            return PadicNum.zero(self.p, int(self.valuation + other.valuation))
        prec = min(self.prec, other.prec)
        return PadicNum(self.p, self.val + other.val, self.unit * other.unit % self.p ** prec, prec)

    def inverse(self) -> "PadicNum":
        if self.unit == 0:
            raise DomainError("division by a p-adic zero")
        return PadicNum(self.p, -self.val, pow(self.unit, -1, self.p ** self.prec), self.prec)

    def __truediv__(self, other: "PadicNum") -> "PadicNum":
        return self * other.inverse()

    def to_json(self) -> dict:
        return {"p": self.p, "val": self.val, "unit": self.unit, "prec": self.prec}

    @classmethod
    def from_json(cls, obj: dict) -> "PadicNum":
        return cls(int(obj["p"]), None if obj["val"] is None else int(obj["val"]),
                   int(obj["unit"]), int(obj["prec"]))


def hensel_sqrt(c: PadicNum) -> PadicNum | None:
    """Square root of c, or None if c is not a square.

    Of the two roots the one whose leading digit is the smaller residue in
    [1, p-1] is returned.
    """
    p = c.p
    if p == 2:
        raise PreconditionError("hensel_sqrt needs an odd prime")
    if c.is_exact_zero:
        return c
    if c.is_zero:
        return PadicNum.zero(p, c.val // 2)
    if c.prec < 1:
        raise PrecisionError("need at least one significant digit")
    if c.val % 2:
        return None
    u = c.unit
    if legendre(u, p) != 1:
        return None
    r = min(sqrt_mod(u % p, p, all_roots=True))
    k = 1
    while k < c.prec:
        k = min(2 * k, c.prec)
        mod = p ** k
        r = (r - (r * r - u) * pow(2 * r, -1, mod)) % mod
    return PadicNum(p, c.val // 2, r, c.prec)


@dataclass(frozen=True)
class QuadExtNum:
    """x + y*sqrt(D) in the unramified quadratic extension of Q_p."""

    x: PadicNum
    y: PadicNum
    D: int

    def __post_init__(self):
        if self.x.p != self.y.p:
            raise DomainError("coordinates over different primes")
        if self.x.p == 2:
            raise PreconditionError("no quadratic-extension arithmetic at p = 2")
        if legendre(self.D, self.x.p) != -1:
            raise DomainError(f"D = {self.D} is not a unit nonsquare mod {self.x.p}")

    @property
    def p(self) -> int:
        return self.x.p

    @classmethod
    def from_ints(cls, x: Rational, y: Rational, p: int, prec: int = DEFAULT_PRECISION,
                  D: int | None = None) -> "QuadExtNum":
        return cls(PadicNum.from_rational(x, p, prec), PadicNum.from_rational(y, p, prec),
                   smallest_nonresidue(p) if D is None else D)

    def _d(self) -> PadicNum:
        return PadicNum.from_rational(self.D, self.p, max(self.x.prec, self.y.prec, 1) + 1)

    def _check(self, other):
        if self.D != other.D or self.p != other.p:
            raise DomainError("mismatched quadratic extensions")

    def __add__(self, other):
        self._check(other)
        return QuadExtNum(self.x + other.x, self.y + other.y, self.D)

    def __neg__(self):
        return QuadExtNum(-self.x, -self.y, self.D)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        x = self.x * other.x + self._d() * self.y * other.y
        y = self.x * other.y + self.y * other.x
        return QuadExtNum(x, y, self.D)

    def conj(self) -> "QuadExtNum":
        return QuadExtNum(self.x, -self.y, self.D)

    def norm(self) -> PadicNum:
        return self.x * self.x - self._d() * self.y * self.y

    def trace(self) -> PadicNum:
        return self.x + self.x

    @property
    def valuation(self) -> float:
        return min(self.x.valuation, self.y.valuation)

    def inverse(self) -> "QuadExtNum":
        n = self.norm().inverse()
        c = self.conj()
        return QuadExtNum(c.x * n, c.y * n, self.D)

    def lift(self) -> tuple[Fraction, Fraction]:
        return self.x.lift(), self.y.lift()

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json(), "D": self.D}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadExtNum":
        x = PadicNum.from_json(obj["x"])
        return cls(x, PadicNum.from_json(obj["y"]),
                   int(obj.get("D", smallest_nonresidue(x.p))))
