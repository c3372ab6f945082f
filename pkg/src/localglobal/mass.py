"""Mass identities: finite group orders, Weyl ratios, the mass of a
definite form from the Euler characteristic of a neighbor, and the
Eichler-Deuring and Drinfeld-Vladut checks."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from sympy import factorint

from .arith import Rational, as_rational, prime_divisors
from .errors import DomainError, PreconditionError

KINDS = ("SO_odd", "SO_even+", "SO_even-", "U")
FAMILIES = ("odd-orth", "even-orth+", "even-orth-", "herm")


def _check_q(q: int):
    if q < 2 or len(factorint(q)) != 1:
        raise DomainError(f"q = {q} is not a prime power")


def finite_group_order(kind: str, dim: int, q: int) -> int:
    """|SO_dim(F_q)|, |SO^+-_dim(F_q)| or |U_dim(F_q)|."""
    _check_q(q)
    if dim < 0:
        raise DomainError("negative dimension")
    if kind == "SO_odd":
        if dim % 2 == 0:
            raise DomainError("SO_odd needs odd dimension")
        m = dim // 2
        out = q ** (m * m)
        for i in range(1, m + 1):
            out *= q ** (2 * i) - 1
        return out
    if kind in ("SO_even+", "SO_even-"):
        if dim % 2:
            raise DomainError("SO_even needs even dimension")
        eps = 1 if kind == "SO_even+" else -1
        m = dim // 2
        if m == 0:
            return 1
        out = q ** (m * (m - 1)) * (q ** m - eps)
        for i in range(1, m):
            out *= q ** (2 * i) - 1
        return out
    if kind == "U":
        out = q ** (dim * (dim - 1) // 2)
        for i in range(1, dim + 1):
            out *= q ** i - (-1) ** i
        return out
    raise DomainError(f"unknown group kind {kind!r}")


def _weyl_B(n: int) -> int:
    return 2 ** n * factorial(n)


def _weyl_D(m: int) -> int:
    # D_1 is a torus with trivial Weyl group
    return 1 if m <= 1 else 2 ** (m - 1) * factorial(m)


@dataclass(frozen=True)
class MassFamily:
    """Definite data of dimension 2n+1 (odd-orth), 2n (even-orth+-) or n (herm)."""

    family: str
    n: int
    q: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        _check_q(self.q)
        least = {"odd-orth": 1, "even-orth+": 2, "even-orth-": 2, "herm": 1}[self.family]
        if self.n < least:
            raise DomainError(f"{self.family} needs n >= {least}")

    @property
    def dim(self) -> int:
        return 2 * self.n + 1 if self.family == "odd-orth" else \
            2 * self.n if self.family.startswith("even") else self.n

    @property
    def dimS(self) -> int:
        return self.dim - 2 if self.family != "herm" else self.dim - 1

    def weyl_ratio(self) -> int:
        n = self.n
        if self.family == "odd-orth":
            return _weyl_B(n) // _weyl_B(n - 1)
        if self.family == "herm":
            return factorial(n) // factorial(n - 1)
        return _weyl_D(n) // _weyl_D(n - 1)

    def G0_order(self) -> int:
        kind = {"odd-orth": "SO_odd", "even-orth+": "SO_even+",
                "even-orth-": "SO_even-", "herm": "U"}[self.family]
        return finite_group_order(kind, self.dim, self.q)

    def N0_order(self) -> int:
        """Reductive quotient of the parahoric: the anisotropic plane (or line)
        times the group of the self-dual complement."""
        q = self.q
        if self.family == "herm":
            return finite_group_order("U", 1, q) * finite_group_order("U", self.dim - 1, q)
        torus = finite_group_order("SO_even-", 2, q)
        if self.family == "odd-orth":
            return torus * finite_group_order("SO_odd", self.dim - 2, q)
        # the complement of a non-split plane flips the discriminant
        rest = "SO_even-" if self.family == "even-orth+" else "SO_even+"
        return torus * finite_group_order(rest, self.dim - 2, q)


def weyl_ratio(family: str, n: int) -> int:
    return MassFamily(family, n, 2).weyl_ratio()


def mass_from_chi(fam: MassFamily, chi: Rational) -> Fraction:
    """Mass = #G0 / (#N0 * (-q)^dimS) * chi / #(W_G/W_H)."""
    chi = as_rational(chi)
    factor = Fraction(fam.G0_order(), fam.N0_order() * (-fam.q) ** fam.dimS)
    return factor * chi / fam.weyl_ratio()


def display_factor(fam: MassFamily) -> Fraction:
    return Fraction(fam.G0_order(), fam.N0_order() * (-fam.q) ** fam.dimS)


def alternating_sum(q: int, exponent: int) -> Fraction:
    """1 - q + q^2 - ... + (-q)^(exponent - 1) = (1 - q^exponent)/(1 + q)."""
    if exponent < 2 or exponent % 2:
        raise PreconditionError("exponent must be 2n with n >= 1")
    return Fraction(1 - q ** exponent, 1 + q)


def psi(N: int) -> Fraction:
    if N < 1:
        raise DomainError("level must be positive")
    out = Fraction(N)
    for l in prime_divisors(N):
        out *= Fraction(l + 1, l)
    return out


def chi_modular(N: int) -> Fraction:
    """Orbifold Euler characteristic of X_0(N) minus cusps: -psi(N)/12."""
    return -psi(N) / 12


def eichler_mass(p: int, N: int) -> Fraction:
    """Sum of 1/#Aut over supersingular points of level N in characteristic p."""
    if p < 2 or len(factorint(p)) != 1 or factorint(p).get(p) != 1:
        raise DomainError(f"{p} is not prime")
    if N % p == 0:
        raise PreconditionError("p must not divide N")
    return Fraction(p - 1, 24) * psi(N)


def dv_check(q: int, point_count: int, g: int) -> bool:
    """2 * #S_M(q^2) >= (1 - q)(2 - 2g)."""
    if q < 2 or g < 0 or point_count < 0:
        raise PreconditionError("need q >= 2, g >= 0, point_count >= 0")
    return 2 * point_count >= (1 - q) * (2 - 2 * g)
