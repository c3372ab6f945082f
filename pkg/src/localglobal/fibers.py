"""Fibers of Y -> Z at an odd prime: the sublattices M = <v, w> (or <v>)
complementing a self-dual M-perp inside a maximal lattice
Lambda = A_K e + L, parametrized by vectors in pi*A_K.

All computations use exact rational lifts; results are certified modulo
p^m where m is the declared precision.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .arith import (PadicNum, QuadExtNum, Rational, as_rational, smallest_nonresidue,
                    unit_square_class, valuation)
from .errors import PrecisionError, PreconditionError
from .hermitian import INERT, ImagQuadField, place_splitting
from .lattices import Matrix, _det, block_diag, is_maximal, maximal_lattice, seed_gram

DEFAULT_FIBER_PRECISION = 6


@dataclass(frozen=True)
class BaseDecomposition:
    """Lambda = A_K e + L.  Orthogonal: basis (e, f = sqrt(D) e, g_1, ...).
    Hermitian: basis (e, f_1, ...) over A_K with h(e, e) = e_norm."""

    p: int
    n: int
    e_norm: int
    W_gram: Matrix
    L_gram: Matrix
    orientation: int = 1
    kind: str = "orth"
    m: int = 0  # the field Q(sqrt(-m)) for Hermitian bases

    @property
    def D(self) -> int:
        return smallest_nonresidue(self.p) if self.kind == "orth" else -self.m

    @property
    def gram(self) -> Matrix:
        return block_diag(self.W_gram, self.L_gram)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "p": self.p, "n": self.n, "e_norm": self.e_norm,
               "W_gram": [[str(x) for x in r] for r in self.W_gram],
               "L_gram": [[str(x) for x in r] for r in self.L_gram],
               "orientation": self.orientation}
        if self.kind == "herm":
            out["m"] = self.m
        return out


def base_point(n: int, d: Rational, eps: int, p: int, orientation: int = 1) -> BaseDecomposition:
    if eps != -1:
        raise PreconditionError("the fiber picture needs eps = -1 (no self-dual lattice)")
    if n < 3:
        raise PreconditionError("orthogonal base point needs n >= 3")
    if orientation not in (1, -1):
        raise PreconditionError("orientation must be +1 or -1")
    L = maximal_lattice(n, d, eps, p)
    u = unit_square_class(d, p)
    rest = maximal_lattice(n - 2, unit_square_class(-u * smallest_nonresidue(p), p), 1, p)
    W = seed_gram(-1, p)
    assert L.gram == block_diag(W, rest.gram) and is_maximal(L)
    return BaseDecomposition(p, n, p, W, rest.gram, orientation)


def base_point_herm(K: ImagQuadField, n: int, p: int) -> BaseDecomposition:
    """Hermitian base for a non-norm determinant: h = diag(p, 1, ..., 1)."""
    if n < 2:
        raise PreconditionError("Hermitian base point needs n >= 2")
    if p == 2 or place_splitting(K, p) != INERT:
        raise PreconditionError(f"{p} must be an odd prime inert in {K}")
    one = Fraction(1)
    L = tuple(tuple(one if i == j else Fraction(0) for j in range(n - 1)) for i in range(n - 1))
    return BaseDecomposition(p, n, p, ((Fraction(p),),), L, 1, "herm", K.m)


@dataclass(frozen=True)
class FiberParameter:
    entries: tuple[QuadExtNum, ...]
    precision: int = DEFAULT_FIBER_PRECISION

    def __post_init__(self):
        if self.precision < 2:
            raise PrecisionError("fiber computations need precision m >= 2")
        for t in self.entries:
            for c in (t.x, t.y):
                if not c.is_exact_zero and c.abs_prec < self.precision:
                    raise PrecisionError(f"entry known only to p^{c.abs_prec}")
            if _qval(t) < 1:
                raise PreconditionError("parameter entries must lie in pi*A_K")

    @classmethod
    def from_pairs(cls, pairs, p: int, precision: int = DEFAULT_FIBER_PRECISION,
                   D: int | None = None) -> "FiberParameter":
        return cls(tuple(QuadExtNum.from_ints(x, y, p, precision, D) for x, y in pairs), precision)

    @classmethod
    def zero(cls, length: int, p: int, precision: int = DEFAULT_FIBER_PRECISION,
             D: int | None = None) -> "FiberParameter":
        z = PadicNum.zero(p)
        D = smallest_nonresidue(p) if D is None else D
        return cls(tuple(QuadExtNum(z, z, D) for _ in range(length)), precision)

    def to_json(self) -> dict:
        return {"entries": [t.to_json() for t in self.entries], "precision": self.precision}

    @classmethod
    def from_json(cls, obj: dict) -> "FiberParameter":
        return cls(tuple(QuadExtNum.from_json(t) for t in obj["entries"]),
                   int(obj.get("precision", DEFAULT_FIBER_PRECISION)))


def _qval(t: QuadExtNum) -> float:
    vals = [c.valuation for c in (t.x, t.y) if not c.is_zero]
    return min(vals) if vals else float("inf")


def filtration_level(t: FiberParameter) -> int:
    """Largest m0 with every entry in pi^(m0+1) A_K, capped by the precision."""
    v = min((_qval(x) for x in t.entries), default=float("inf"))
    return int(min(v - 1, t.precision))


def _mod(x: Fraction, q: int) -> int:
    return x.numerator * pow(x.denominator, -1, q) % q


def _reduce(rows, q: int) -> list[list[int]]:
    return [[_mod(x, q) for x in r] for r in rows]


def _vp(x: Fraction, p: int) -> float:
    return float("inf") if x == 0 else valuation(x, p)


@dataclass(frozen=True)
class FiberPoint:
    precision: int
    M_gram: list
    Mperp_gram: list
    basis: list          # rows: v, w (or v), then the M-perp basis, in the basis of Lambda
    M_gram_exact: Matrix
    Mperp_gram_exact: Matrix
    change_det: Fraction

    def to_json(self) -> dict:
        return {"precision": self.precision, "M_gram": self.M_gram,
                "Mperp_gram": self.Mperp_gram, "basis": self.basis}


def _check_param(base: BaseDecomposition, t: FiberParameter, length: int):
    if len(t.entries) != length:
        raise PreconditionError(f"parameter must have {length} entries")
    for x in t.entries:
        if x.p != base.p or x.D != base.D:
            raise PreconditionError("parameter lives in the wrong quadratic extension")


def _bil(G: Matrix, x, y) -> Fraction:
    return sum((x[i] * G[i][j] * y[j] for i in range(len(x)) for j in range(len(y))
                if x[i] and y[j]), Fraction(0))


def fiber_vectors(base: BaseDecomposition, t: FiberParameter) -> tuple[list, list]:
    """v = e + sum x_i g_i and w = s f + D sum y_i g_i for t_i = x_i + y_i sqrt(D)."""
    k = base.n - 2
    _check_param(base, t, k)
    xs = [e.x.lift() for e in t.entries]
    ys = [e.y.lift() for e in t.entries]
    D = base.D
    v = [Fraction(1), Fraction(0)] + xs
    w = [Fraction(0), Fraction(base.orientation)] + [D * y for y in ys]
    return v, w


def fiber_point(base: BaseDecomposition, t: FiberParameter) -> FiberPoint:
    if base.kind != "orth":
        raise PreconditionError("use fiber_point_herm for Hermitian bases")
    p, m, k = base.p, t.precision, base.n - 2
    G = base.gram
    v, w = fiber_vectors(base, t)
    ev, fw = _bil(G, [1, 0] + [0] * k, v), _bil(G, [0, 1] + [0] * k, w)
    perp = []
    for j in range(k):
        g = [0, 0] + [int(i == j) for i in range(k)]
        a = -_bil(G, g, v) / ev
        b = -_bil(G, g, w) / fw
        perp.append([a, b] + [Fraction(x) for x in g[2:]])
    rows = [v, w] + perp
    change = _det(rows)
    M = ((_bil(G, v, v), _bil(G, v, w)), (_bil(G, w, v), _bil(G, w, w)))
    P = tuple(tuple(_bil(G, x, y) for y in perp) for x in perp)
    if any(_vp(x, p) < 0 for r in rows for x in r):
        raise AssertionError("internal: basis vector outside Lambda")
    if _vp(change, p) != 0:
        raise AssertionError("internal: M + M-perp is not all of Lambda")
    if any(_bil(G, x, y) for x in (v, w) for y in perp):
        raise AssertionError("internal: M-perp is not orthogonal to M")
    if k and _vp(_det(P), p) != 0:
        raise AssertionError("internal: M-perp is not self-dual")
    W = base.W_gram
    if any(_vp(M[i][j] - W[i][j], p) < 2 for i in range(2) for j in range(2)):
        raise AssertionError("internal: M is not congruent to A_K e mod p^2")
    q = p ** m
    return FiberPoint(m, _reduce(M, q), _reduce(P, q), _reduce(rows, q), M, P, change)


def expansion_products(base: BaseDecomposition, alpha: QuadExtNum, beta: QuadExtNum,
                       lam, mu) -> dict:
    """Inner products of v = alpha.e + lam, w = beta.e + mu with lam, mu in pL,
    together with 2N(alpha)p, 2N(beta)p and Tr(alpha conj(beta))p."""
    p, k, D = base.p, base.n - 2, base.D
    G = base.gram
    s = base.orientation
    ax, ay = alpha.lift()
    bx, by = beta.lift()
    lam = [as_rational(x) for x in lam]
    mu = [as_rational(x) for x in mu]
    if len(lam) != k or len(mu) != k or any(_vp(x, p) < 1 for x in lam + mu):
        raise PreconditionError("lam and mu must be vectors in pi*L")
    # (x + y sqrt(D)).e = x e + y s f
    v = [ax, s * ay] + lam
    w = [bx, s * by] + mu
    return {"vv": _bil(G, v, v), "ww": _bil(G, w, w), "vw": _bil(G, v, w),
            "2N(alpha)p": 2 * p * (ax * ax - D * ay * ay),
            "2N(beta)p": 2 * p * (bx * bx - D * by * by),
            "Tr(alpha conj(beta))p": 2 * p * (ax * bx - D * ay * by)}


def expansion_congruences_hold(products: dict, p: int) -> bool:
    pairs = (("vv", "2N(alpha)p"), ("ww", "2N(beta)p"), ("vw", "Tr(alpha conj(beta))p"))
    return all(_vp(products[a] - products[b], p) >= 2 for a, b in pairs)


# ----------------------------------------------------------- Hermitian

# x + y*sqrt(D) as a pair of fractions
def _kmul(a, b, D):
    return (a[0] * b[0] + D * a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _kconj(a):
    return (a[0], -a[1])


def _kadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _kdiv(a, b, D):
    n = b[0] * b[0] - D * b[1] * b[1]
    c = _kmul(a, _kconj(b), D)
    return (c[0] / n, c[1] / n)


def _kdet(rows, D):
    a = [list(r) for r in rows]
    n = len(a)
    zero = (Fraction(0), Fraction(0))
    det = (Fraction(1), Fraction(0))
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != zero), None)
        if piv is None:
            return zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = (-det[0], -det[1])
        det = _kmul(det, a[k][k], D)
        for i in range(k + 1, n):
            f = _kdiv(a[i][k], a[k][k], D)
            a[i] = [_kadd(x, _kmul((-f[0], -f[1]), y, D)) for x, y in zip(a[i], a[k])]
    return det


def _hform(G, x, y, D):
    """h(x, y) = sum x_i G_ij conj(y_j) for a diagonal rational G."""
    out = (Fraction(0), Fraction(0))
    for i in range(len(x)):
        out = _kadd(out, _kmul(_kmul(x[i], (G[i][i], Fraction(0)), D), _kconj(y[i]), D))
    return out


@dataclass(frozen=True)
class HermFiberPoint:
    precision: int
    M_gram: list
    Mperp_gram: list
    Mperp_det: Fraction
    basis: list

    def to_json(self) -> dict:
        return {"precision": self.precision, "M_gram": self.M_gram,
                "Mperp_gram": self.Mperp_gram, "Mperp_det": str(self.Mperp_det),
                "basis": self.basis}


def fiber_point_herm(base: BaseDecomposition, t: FiberParameter) -> HermFiberPoint:
    """M = <v>, v = e + mu with mu = sum t_i f_i; M-perp spanned by
    -conj(beta_i) e + f_i where t_i = p beta_i."""
    if base.kind != "herm":
        raise PreconditionError("use fiber_point for orthogonal bases")
    p, m, n, D = base.p, t.precision, base.n, base.D
    _check_param(base, t, n - 1)
    G = base.gram
    one, zero = (Fraction(1), Fraction(0)), (Fraction(0), Fraction(0))
    ts = [e.lift() for e in t.entries]
    v = [one] + ts
    perp = []
    for i, ti in enumerate(ts):
        beta = (ti[0] / p, ti[1] / p)
        nb = _kconj(beta)
        perp.append([(-nb[0], -nb[1])] + [one if j == i else zero for j in range(n - 1)])
    rows = [v] + perp
    if any(_hform(G, x, v, D) != zero for x in perp):
        raise AssertionError("internal: M-perp is not orthogonal to M")
    change = _kdet(rows, D)
    if _vp(change[0] * change[0] - D * change[1] * change[1], p) != 0:
        raise AssertionError("internal: M + M-perp is not all of Lambda")
    hv = _hform(G, v, v, D)
    P = [[_hform(G, x, y, D) for y in perp] for x in perp]
    det = _kdet(P, D) if P else one
    assert det[1] == 0 and hv[1] == 0
    if _vp(det[0] - 1, p) < 1:
        raise AssertionError("internal: M-perp determinant is not 1 mod pi")
    if _vp(hv[0] - p, p) < 2:
        raise AssertionError("internal: h(v, v) is not p mod p^2")
    q = p ** m
    red = lambda a: [_mod(a[0], q), _mod(a[1], q)]
    return HermFiberPoint(m, [[_mod(hv[0], q)]], [[red(x) for x in r] for r in P], det[0],
                          [[red(x) for x in r] for r in rows])


# -------------------------------------------------------- enumeration

def parameters_mod(p: int, length: int, m: int, D: int | None = None):
    """All parameters in (pi A_K / pi^(m+1) A_K)^length, as FiberParameters
    of precision m + 1."""
    D = smallest_nonresidue(p) if D is None else D
    q = p ** m
    coords = [(p * x, p * y) for x in range(q) for y in range(q)]
    for combo in itertools.product(coords, repeat=length):
        yield FiberParameter.from_pairs(combo, p, m + 1, D)


def filtration_counts(p: int, length: int, m: int) -> dict[int, int]:
    """Number of parameters mod pi^(m+1) at each filtration level 0..m."""
    counts: dict[int, int] = {}
    for t in parameters_mod(p, length, m):
        lvl = min(filtration_level(t), m)
        counts[lvl] = counts.get(lvl, 0) + 1
    return dict(sorted(counts.items()))


def sublattice_key(base: BaseDecomposition, t: FiberParameter) -> tuple:
    """The canonical basis (v, w) of M reduced mod p^m."""
    v, w = fiber_vectors(base, t)
    q = base.p ** t.precision
    return tuple(tuple(_mod(x, q) for x in r) for r in (v, w))
