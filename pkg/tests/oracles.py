"""Brute-force oracles, independent of the library's symbol formulas.

* isotropy of a diagonal form over Q_p by searching primitive zeros
  mod p^k (bitmask dynamic programming over the values of sum c_i x_i^2);
* finite classical group orders by backtracking over matrix columns;
* supersingular j-invariants via the Hasse invariant of Legendre curves;
* psi(N) as the number of points of P^1(Z/N).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd


# ------------------------------------------------------------ isotropy

def _lift_exponent(p: int) -> int:
    # Hensel: a primitive zero mod p^(2*delta + 1) lifts, delta = v(2 c_i) <= v(2) + 1
    return 5 if p == 2 else 3


def _residue(c: Fraction | int, N: int) -> int:
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, N) % N


@lru_cache(maxsize=None)
def _square_values(c: int, p: int, N: int) -> tuple[frozenset, frozenset]:
    """Values c*x^2 mod N for x a unit, and for x a non-unit."""
    unit, nonunit = set(), set()
    for x in range(N):
        (nonunit if x % p == 0 else unit).add(c * x * x % N)
    return frozenset(unit), frozenset(nonunit)


def _shift(mask: int, s: int, N: int, full: int) -> int:
    if s == 0:
        return mask
    return ((mask << s) | (mask >> (N - s))) & full


def brute_isotropic(coeffs, p: int) -> bool:
    """Does sum c_i x_i^2 = 0 have a primitive solution in Z_p?

    Coefficients must be p-integral of valuation <= 1.
    """
    k = _lift_exponent(p)
    N = p ** k
    full = (1 << N) - 1
    reach_any, reach_prim = 1, 0   # bit j set: value j reachable
    for c in coeffs:
        c = Fraction(c)
        assert c != 0 and (c.numerator % (p * p)) and c.denominator % p
        units, nonunits = _square_values(_residue(c, N), p, N)
        new_any = new_prim = 0
        for s in units:
            sh = _shift(reach_any, s, N, full)
            new_any |= sh
            new_prim |= sh
        for s in nonunits:
            new_any |= _shift(reach_any, s, N, full)
            new_prim |= _shift(reach_prim, s, N, full)
        reach_any, reach_prim = new_any, new_prim
    return bool(reach_prim & 1)


def brute_hilbert(a: int, b: int, p: int) -> int:
    """(a, b)_p for squarefree a, b: +1 iff a x^2 + b y^2 - z^2 is isotropic."""
    return 1 if brute_isotropic((a, b, -1), p) else -1


def brute_represents(coeffs, c, p: int) -> bool:
    """Does the form represent c over Q_p?  (iff the form + <-c> is isotropic)"""
    return brute_isotropic(tuple(coeffs) + (-Fraction(c),), p)


# ------------------------------------------------------- finite groups

class GF:
    """F_q for q in {2, 3} and F_{q^2} as pairs (a, b) = a + b*t."""

    def __init__(self, q: int):
        self.q = q
        # F_4 = F_2[t]/(t^2 + t + 1), F_9 = F_3[t]/(t^2 + 1)
        self.rel = {2: (1, 1), 3: (-1, 0)}[q]   # t^2 = r0 + r1 t

    def mul(self, x, y):
        q, (r0, r1) = self.q, self.rel
        a, b = x
        c, d = y
        bd = b * d
        return ((a * c + bd * r0) % q, (a * d + b * c + bd * r1) % q)

    def add(self, x, y):
        return ((x[0] + y[0]) % self.q, (x[1] + y[1]) % self.q)

    def frob(self, x):
        out = (1, 0)
        for _ in range(self.q):
            out = self.mul(out, x)
        return out

    def elements(self):
        return [(a, b) for a in range(self.q) for b in range(self.q)]


def _vectors(field_elems, n):
    if n == 0:
        yield ()
        return
    for head in field_elems:
        for tail in _vectors(field_elems, n - 1):
            yield (head,) + tail


def _rank_mod(rows, q):
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % q), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, q)
        rows[rank] = [x * inv % q for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % q:
                f = rows[i][col]
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _det_mod(cols, q):
    n = len(cols)
    a = [[cols[j][i] % q for j in range(n)] for i in range(n)]
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k] % q
        inv = pow(a[k][k], -1, q)
        for i in range(k + 1, n):
            f = a[i][k] * inv % q
            a[i] = [(x - f * y) % q for x, y in zip(a[i], a[k])]
    return det % q


def quadratic_form(kind: str, n: int, q: int):
    """A form Q(x) over F_q (q prime) of the named type, as a function."""
    if kind == "SO_odd":
        assert n == 3
        return (lambda x: (x[0] * x[0] + x[1] * x[2]) % q)
    if kind == "SO_even+":
        assert n == 4
        return (lambda x: (x[0] * x[1] + x[2] * x[3]) % q)
    if kind == "SO_even-":
        assert n == 4
        if q == 2:
            return (lambda x: (x[0] * x[1] + x[2] * x[2] + x[2] * x[3] + x[3] * x[3]) % 2)
        # x3^2 - D x4^2 with D a nonsquare mod q
        D = next(d for d in range(2, q) if pow(d, (q - 1) // 2, q) == q - 1)
        return (lambda x: (x[0] * x[1] + x[2] * x[2] - D * x[3] * x[3]) % q)
    raise ValueError(kind)


def brute_orthogonal_order(kind: str, n: int, q: int) -> int:
    """#{g : Q(gx) = Q(x), g in SO} by column backtracking.

    SO means det 1 for odd q; in characteristic 2 it is the kernel of the
    Dickson invariant rank(g - 1) mod 2 (all of O in odd dimension)."""
    Q = quadratic_form(kind, n, q)
    B = lambda x, y: (Q(tuple(a + b for a, b in zip(x, y))) - Q(x) - Q(y)) % q
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    vecs = list(_vectors(range(q), n))
    count = 0

    def extend(cols):
        nonlocal count
        k = len(cols)
        if k == n:
            if q == 2:
                if n % 2 == 0:
                    gm1 = [[(cols[j][i] - basis[j][i]) % 2 for j in range(n)] for i in range(n)]
                    if _rank_mod(gm1, 2) % 2:
                        return
            elif _det_mod(cols, q) != 1:
                return
            count += 1
            return
        for v in vecs:
            if Q(v) != Q(basis[k]):
                continue
            if all(B(v, cols[j]) == B(basis[k], basis[j]) for j in range(k)):
                extend(cols + [v])

    extend([])
    return count


def brute_unitary_order(n: int, q: int) -> int:
    """#{g in GL_n(F_{q^2}) : h(g e_i, g e_j) = delta_ij}, h(x, y) = sum x_i y_i^q."""
    F = GF(q)
    elems = F.elements()
    zero, one = (0, 0), (1, 0)

    def h(x, y):
        out = zero
        for a, b in zip(x, y):
            out = F.add(out, F.mul(a, F.frob(b)))
        return out

    vecs = list(_vectors(elems, n))
    count = 0

    def extend(cols):
        nonlocal count
        if len(cols) == n:
            count += 1
            return
        for v in vecs:
            if h(v, v) == one and all(h(v, c) == zero for c in cols):
                extend(cols + [v])

    extend([])
    return count


# ------------------------------------------------- supersingular points

def _fp2(p: int):
    D = next(d for d in range(2, p) if pow(d, (p - 1) // 2, p) == p - 1)

    def mul(x, y):
        return ((x[0] * y[0] + D * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def add(x, y):
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def inv(x):
        n = (x[0] * x[0] - D * x[1] * x[1]) % p
        ni = pow(n, -1, p)
        return (x[0] * ni % p, -x[1] * ni % p)

    return mul, add, inv


def supersingular_j(p: int) -> set:
    """j-invariants in F_{p^2} of supersingular curves (p >= 5), from the
    roots of the Hasse polynomial sum_i C(m, i)^2 lambda^i, m = (p-1)/2."""
    mul, add, inv = _fp2(p)
    m = (p - 1) // 2
    coeffs = [comb(m, i) ** 2 % p for i in range(m + 1)]
    out = set()
    for a in range(p):
        for b in range(p):
            lam = (a, b)
            val, pw = (0, 0), (1, 0)
            for c in coeffs:
                val = add(val, mul((c, 0), pw))
                pw = mul(pw, lam)
            if val != (0, 0):
                continue
            # j = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)
            l2 = mul(lam, lam)
            num = add(add(l2, ((-a) % p, (-b) % p)), (1, 0))
            num = mul(mul(num, num), num)
            lm1 = add(lam, (p - 1, 0))
            den = mul(l2, mul(lm1, lm1))
            out.add(mul((256 % p, 0), mul(num, inv(den))))
    return out


def supersingular_mass(p: int) -> Fraction:
    """Sum of 1/#Aut(E) over supersingular E / F_pbar, p >= 5."""
    total = Fraction(0)
    for j in supersingular_j(p):
        if j == (0, 0):
            total += Fraction(1, 6)
        elif j == (1728 % p, 0):
            total += Fraction(1, 4)
        else:
            total += Fraction(1, 2)
    return total


def psi_by_counting(N: int) -> int:
    """#P^1(Z/N): primitive pairs (c, d) mod N modulo units."""
    pairs = sum(1 for c in range(N) for d in range(N) if gcd(gcd(c, d), N) == 1)
    units = sum(1 for u in range(N) if gcd(u, N) == 1)
    return pairs // units


# ------------------------------------------------------ lattices

def induced_binary_isometric_brute(F, G, p: int) -> bool:
    """Same question as lattices.binary_isometric, enumerated by images of
    the first basis vector and then of the second."""
    def val(M, x, y):
        return (M[0][0] * x * x + 2 * M[0][1] * x * y + M[1][1] * y * y) % p

    def bil(M, u, w):
        return (M[0][0] * u[0] * w[0] + M[0][1] * (u[0] * w[1] + u[1] * w[0])
                + M[1][1] * u[1] * w[1]) % p

    vs = [(x, y) for x in range(p) for y in range(p) if x or y]
    for u in vs:
        if val(F, *u) != G[0][0] % p:
            continue
        for w in vs:
            if (u[0] * w[1] - u[1] * w[0]) % p == 0:
                continue
            if val(F, *w) == G[1][1] % p and bil(F, u, w) == G[0][1] % p:
                return True
    return False
