"""Lattices over Z_p (p odd): duals, discriminant groups, maximal lattices.

Gram matrices are matrices of the bilinear form <v,w> = q(v+w) - q(v) - q(w),
so the Gram of a diagonal quadratic form <a_1, ..., a_n> is diag(2a_1, ...).
For odd p the factor 2 is a unit and does not affect duality.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import (Rational, as_rational, fmt_rational, hilbert_symbol, is_local_square,
                    smallest_nonresidue, unit_square_class, valuation)
from .errors import DomainError, PreconditionError
from .hermitian import INERT, ImagQuadField, place_splitting
from .quadratic import hasse_invariant, local_represents

Matrix = tuple[tuple[Fraction, ...], ...]


def _as_matrix(rows: Sequence[Sequence[Rational]]) -> Matrix:
    m = tuple(tuple(as_rational(x) for x in row) for row in rows)
    if not m or any(len(row) != len(m) for row in m):
        raise DomainError("Gram matrix must be square and nonempty")
    return m


def _det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(r) for r in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def _inverse(m: Matrix) -> Matrix:
    n = len(m)
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for k in range(n):
        piv = next(i for i in range(k, n) if a[i][k] != 0)
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return tuple(tuple(r[n:]) for r in a)


def _vp(x: Fraction, p: int) -> float:
    return float("inf") if x == 0 else valuation(x, p)


def block_diag(*blocks: Sequence[Sequence[Rational]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = as_rational(x)
        k += len(b)
    return tuple(tuple(r) for r in out)


def diagonal(*entries: Rational) -> Matrix:
    return block_diag(*[[[e]] for e in entries])


# --------------------------------------------------------------- local SNF

def local_elementary_valuations(gram: Sequence[Sequence[Rational]], p: int) -> list[int]:
    """p-adic valuations of the elementary divisors (Smith form over Z_(p))."""
    a = [list(r) for r in _as_matrix(gram)]
    n = len(a)
    out = []
    for k in range(n):
        best, pos = float("inf"), None
        for i in range(k, n):
            for j in range(k, n):
                v = _vp(a[i][j], p)
                if v < best:
                    best, pos = v, (i, j)
        if pos is None:
            raise DomainError("singular Gram matrix")
        i, j = pos
        a[k], a[i] = a[i], a[k]
        for r in a:
            r[k], r[j] = r[j], r[k]
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        for j in range(k + 1, n):
            f = a[k][j] / piv
            if f:
                for r in a:
                    r[j] -= f * r[k]
        out.append(int(best))
    return sorted(out)


def jordan_diagonal(gram: Sequence[Sequence[Rational]], p: int) -> list[Fraction]:
    """Diagonal entries of a Z_p-congruent diagonal form (p odd)."""
    if p == 2:
        raise PreconditionError("Jordan diagonalization needs p odd")
    a = [list(r) for r in _as_matrix(gram)]
    n = len(a)
    out = []
    for k in range(n):
        cells = [(_vp(a[i][j], p), i != j, i, j) for i in range(k, n) for j in range(i, n)]
        best, _, i, j = min(cells)
        if best == float("inf"):
            raise DomainError("singular Gram matrix")
        if i != j:
            # e_i <- e_i + e_j; the new diagonal entry has the minimal valuation
            a[i] = [x + y for x, y in zip(a[i], a[j])]
            for r in a:
                r[i] += r[j]
        a[k], a[i] = a[i], a[k]
        for r in a:
            r[k], r[i] = r[i], r[k]
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
                for r in a:
                    r[i] -= f * r[k]
        out.append(piv)
    return out


# ------------------------------------------------------------------ types

@dataclass(frozen=True)
class OrthLatticeZp:
    p: int
    gram: Matrix

    def __post_init__(self):
        if self.p == 2 or self.p < 2:
            raise PreconditionError("lattices are handled for odd p only")
        g = _as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise DomainError("Gram matrix is not symmetric")
        if any(_vp(x, self.p) < 0 for row in g for x in row):
            raise DomainError("Gram entries must be p-integral")
        if _det(g) == 0:
            raise DomainError("Gram matrix is singular")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> Fraction:
        return _det(self.gram)

    def quadratic_coeffs(self) -> list[Fraction]:
        """A diagonalization of q(x) = <x,x>/2 over Q_p."""
        return [x / 2 for x in jordan_diagonal(self.gram, self.p)]

    def to_json(self) -> dict:
        return {"p": self.p, "gram": [[fmt_rational(x) for x in r] for r in self.gram]}

    @classmethod
    def from_json(cls, obj: dict) -> "OrthLatticeZp":
        return cls(int(obj["p"]), obj["gram"])


@dataclass(frozen=True)
class DiscriminantGroup:
    """L^vee/L: cyclic factors of the given orders, plus the form p*<,> mod p
    on the generators of the factors of order exactly p."""

    p: int
    divisors: tuple[int, ...]
    form: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.divisors

    def to_json(self) -> dict:
        return {"p": self.p, "divisors": list(self.divisors), "form": [list(r) for r in self.form]}


def dual_gram(gram: Sequence[Sequence[Rational]]) -> Matrix:
    """Gram of the dual lattice in the dual basis."""
    return _inverse(_as_matrix(gram))


def dual_quotient(L: OrthLatticeZp) -> DiscriminantGroup:
    p = L.p
    diag = jordan_diagonal(L.gram, p)
    vals = [valuation(x, p) for x in diag]
    divisors = tuple(sorted(p ** v for v in vals if v > 0))
    residues = [int((x / p).numerator * pow((x / p).denominator, -1, p) % p)
                for x, v in zip(diag, vals) if v == 1]
    form = tuple(tuple(r if i == j else 0 for j in range(len(residues)))
                 for i, r in enumerate(residues))
    return DiscriminantGroup(p, divisors, form)


def is_selfdual(L: OrthLatticeZp) -> bool:
    return valuation(L.det, L.p) == 0


def binary_anisotropic(F: Sequence[Sequence[int]], p: int) -> bool:
    """Brute force: no nonzero (x, y) in F_p^2 with F(x, y) = 0."""
    (a, b), (_, c) = F
    return all((a * x * x + 2 * b * x * y + c * y * y) % p
               for x in range(p) for y in range(p) if x or y)


def binary_isometric(F: Sequence[Sequence[int]], G: Sequence[Sequence[int]], p: int) -> bool:
    """Brute force over GL_2(F_p): is there g with g^T F g = G mod p?"""
    (a, b), (_, c) = F
    (a2, b2), (_, c2) = G
    for r, s, t, u in itertools.product(range(p), repeat=4):
        if (r * u - s * t) % p == 0:
            continue
        # columns (r, t) and (s, u)
        if ((a * r * r + 2 * b * r * t + c * t * t - a2) % p == 0
                and (a * s * s + 2 * b * s * u + c * u * u - c2) % p == 0
                and (a * r * s + b * (r * u + s * t) + c * t * u - b2) % p == 0):
            return True
    return False


def norm_form_gram(p: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Polarized norm form of F_{p^2} = F_p(sqrt(D)): diag(2, -2D) mod p."""
    D = smallest_nonresidue(p)
    return ((2 % p, 0), (0, -2 * D % p))


def is_maximal(L: OrthLatticeZp) -> bool:
    """Maximality for lattices in a space of unit determinant class."""
    p = L.p
    if valuation(L.det, p) % 2:
        raise PreconditionError("determinant of odd valuation: outside the unit-determinant case")
    G = dual_quotient(L)
    if G.is_trivial:
        return True
    return G.divisors == (p, p) and binary_anisotropic(G.form, p)


# --------------------------------------------------------- local spaces

def local_space_exists(n: int, d: Rational, eps: int, p: int) -> bool:
    if n < 1 or eps not in (1, -1):
        return False
    if n == 1:
        return eps == 1
    if n == 2 and is_local_square(-as_rational(d), p):
        return eps == 1
    return True


def _unit_class(d: Rational, p: int) -> int:
    d = as_rational(d)
    if d == 0 or valuation(d, p) % 2:
        raise PreconditionError(f"determinant {d} is not a unit class at {p}")
    return unit_square_class(d, p)


def _check_local(n: int, d: Rational, eps: int, p: int):
    if p == 2:
        raise PreconditionError("lattices are handled for odd p only")
    if not local_space_exists(n, d, eps, p):
        raise PreconditionError(f"no local space of dim {n}, det {d}, eps {eps} at {p}")


@dataclass(frozen=True)
class PlaneEmbedding:
    W: tuple[Fraction, Fraction]
    U: tuple[Fraction, ...]
    U_data: tuple[int, int, int]
    branch: str


def embed_plane(n: int, d: Rational, eps: int, p: int) -> PlaneEmbedding:
    """V = W + U with W = <a, -aD> of determinant -D and eps(W) = eps(V).

    U has data (n - 2, -dD, +1); the result is verified by local invariants.
    """
    if n < 3:
        raise PreconditionError("embed_plane needs n >= 3")
    u = _unit_class(d, p)
    _check_local(n, u, eps, p)
    D = smallest_nonresidue(p)
    a = Fraction(1 if eps == 1 else p)
    W = (a, -a * D)
    dU = unit_square_class(-u * D, p)
    if n == 3:
        # V represents -dD, the one class a ternary space might miss
        assert local_represents(3, u, eps, -u * D, p)
        branch, U = "n=3: V represents -dD", (Fraction(-u * D),)
    elif n == 4 and dU == unit_square_class(-1, p):
        branch, U = "n=4: d = D, U hyperbolic", (Fraction(1), Fraction(-1))
    elif n == 4:
        branch, U = "n=4: d != D", (Fraction(1), Fraction(-u * D))
    else:
        branch, U = "n>=5: unconditional", tuple([Fraction(1)] * (n - 3) + [Fraction(-u * D)])
    eps_w = hasse_invariant(W, p)
    eps_u = hasse_invariant(U, p)
    dw = W[0] * W[1]
    du = Fraction(1)
    for x in U:
        du *= x
    if eps_w != eps or eps_u != 1 or not is_local_square(du / dU, p):
        raise AssertionError("internal: plane embedding failed verification")
    if eps_w * eps_u * hilbert_symbol(dw, du, p) != eps or not is_local_square(dw * du / u, p):
        raise AssertionError("internal: W + U does not reproduce V")
    return PlaneEmbedding(W, U, (n - 2, dU, 1), branch)


def seed_gram(eps: int, p: int) -> Matrix:
    """A_K in (K, N) for eps = +1, in (K, pN) for eps = -1."""
    D = smallest_nonresidue(p)
    s = 1 if eps == 1 else p
    return diagonal(2 * s, -2 * s * D)


def maximal_lattice(n: int, d: Rational, eps: int, p: int) -> OrthLatticeZp:
    u = _unit_class(d, p)
    _check_local(n, u, eps, p)
    D = smallest_nonresidue(p)
    d = as_rational(d)
    # a unit determinant is used as given, otherwise its class representative
    top = d if valuation(d, p) == 0 else Fraction(u)
    if n == 1:
        gram = diagonal(2 * top)
    elif n == 2:
        gram = seed_gram(-1, p) if eps == -1 else diagonal(2, 2 * top)
    else:
        rest = maximal_lattice(n - 2, unit_square_class(-u * D, p), 1, p)
        gram = block_diag(seed_gram(eps, p), rest.gram)
    L = OrthLatticeZp(p, gram)
    coeffs = L.quadratic_coeffs()
    det = Fraction(1)
    for c in coeffs:
        det *= c
    if hasse_invariant(coeffs, p) != eps or not is_local_square(det / u, p):
        raise AssertionError("internal: maximal lattice has the wrong invariants")
    if not is_maximal(L):
        raise AssertionError("internal: constructed lattice is not maximal")
    return L


# ----------------------------------------------------------- Hermitian

# an element x + y*sqrt(-m) of K is stored as the pair (x, y)
KElt = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class HermLatticeZp:
    p: int
    field: ImagQuadField
    gram: tuple[tuple[KElt, ...], ...]

    def __post_init__(self):
        if self.p == 2:
            raise PreconditionError("Hermitian lattices are handled for odd p only")
        if place_splitting(self.field, self.p) != INERT:
            raise PreconditionError(f"{self.p} is not inert in {self.field}")
        g = tuple(tuple((as_rational(e[0]), as_rational(e[1])) for e in row) for row in self.gram)
        n = len(g)
        if not n or any(len(r) != n for r in g):
            raise DomainError("Hermitian Gram must be square and nonempty")
        for i in range(n):
            for j in range(n):
                if g[i][j] != (g[j][i][0], -g[j][i][1]):
                    raise DomainError("Hermitian Gram is not conjugate-symmetric")
        if any(_vp(x, self.p) < 0 for r in g for e in r for x in e):
            raise DomainError("Hermitian Gram entries must be p-integral")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def trace_gram(self) -> Matrix:
        """Z_p-Gram of Tr h(x, y) on the basis b_i, sqrt(-m) b_i."""
        m = self.field.m
        n = self.rank
        out = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
        # Tr(w_a h conj(w_b)) for w in {1, s}, s = sqrt(-m), conj(s) = -s, s^2 = -m
        for i in range(n):
            for j in range(n):
                x, y = self.gram[i][j]
                out[2 * i][2 * j] = 2 * x
                out[2 * i + 1][2 * j + 1] = 2 * m * x
                out[2 * i + 1][2 * j] = -2 * m * y
                out[2 * i][2 * j + 1] = 2 * m * y
        return tuple(tuple(r) for r in out)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.field.m,
                "gram": [[[fmt_rational(e[0]), fmt_rational(e[1])] for e in r] for r in self.gram]}


def herm_dual_quotient(L: HermLatticeZp) -> tuple[tuple[int, ...], int]:
    """Orders of the cyclic factors of L^vee/L over Z_p, and its length as an
    A_K-module (each factor of O_K/p^k contributes two Z_p factors)."""
    vals = local_elementary_valuations(L.trace_gram(), L.p)
    divisors = tuple(sorted(L.p ** v for v in vals if v > 0))
    return divisors, sum(v for v in vals if v > 0) // 2


def herm_maximal_lattice(K: ImagQuadField, n: int, norm_class: int, p: int) -> HermLatticeZp:
    """Identity Gram, or I_{n-1} + [p] when the determinant is a non-norm."""
    if n < 1 or norm_class not in (1, -1):
        raise PreconditionError("need n >= 1 and a norm class of +1 or -1")
    diag = [1] * n
    if norm_class == -1:
        diag[-1] = p
    zero = (Fraction(0), Fraction(0))
    gram = tuple(tuple((Fraction(diag[i]), Fraction(0)) if i == j else zero for j in range(n))
                 for i in range(n))
    L = HermLatticeZp(p, K, gram)
    det = Fraction(1)
    for x in diag:
        det *= x
    assert hilbert_symbol(det, K.disc, p) == norm_class
    return L
