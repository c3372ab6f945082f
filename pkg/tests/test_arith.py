from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from oracles import brute_hilbert

from localglobal.arith import (INF, PadicNum, Place, QuadExtNum, as_place, as_rational,
                               canonical_square_class, hensel_sqrt, hilbert_symbol,
                               is_local_square, legendre, smallest_nonresidue, symbol_support,
                               unit_square_class, valuation)
from localglobal.errors import DomainError, PrecisionError, PreconditionError

nonzero = st.integers(-10 ** 4, 10 ** 4).filter(bool)


class TestPlaces:
    def test_parse(self):
        assert as_place("inf") == INF == as_place("oo") == as_place(None)
        assert as_place(7) == Place(7) and str(Place(7)) == "7" and str(INF) == "inf"

    def test_rejects_composite(self):
        with pytest.raises(DomainError):
            Place(9)

    def test_order(self):
        assert sorted([Place(5), INF, Place(2)]) == [INF, Place(2), Place(5)]


class TestSquareClasses:
    @pytest.mark.parametrize("r, expected", [(8, 2), (Fraction(-3, 12), -1), (Fraction(50, 7), 14),
                                             (-1, -1), (1, 1)])
    def test_examples(self, r, expected):
        assert canonical_square_class(r) == expected

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            canonical_square_class(0)

    @given(nonzero, st.integers(1, 50))
    def test_scaling_by_squares(self, a, k):
        assert canonical_square_class(a * k * k) == canonical_square_class(a)
        assert canonical_square_class(Fraction(a, k * k)) == canonical_square_class(a)

    @pytest.mark.parametrize("p, D", [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2), (17, 3), (23, 5)])
    def test_smallest_nonresidue(self, p, D):
        assert smallest_nonresidue(p) == D

    def test_nonresidue_needs_odd_prime(self):
        with pytest.raises(PreconditionError):
            smallest_nonresidue(2)

    def test_local_squares(self):
        assert is_local_square(17, 2) and not is_local_square(5, 2)
        assert is_local_square(Fraction(9, 4), 2)
        assert is_local_square(2, 7) and not is_local_square(3, 7) and not is_local_square(7, 7)
        assert is_local_square(3, 0) and not is_local_square(-3, 0)

    def test_unit_square_class(self):
        assert unit_square_class(4, 5) == 1 and unit_square_class(3, 5) == 2
        assert unit_square_class(Fraction(3, 25), 5) == 2


class TestHilbert:
    @pytest.mark.parametrize("a, b, v, s", [(-1, -1, 2, -1), (-1, -1, INF, -1), (2, 3, 3, -1),
                                            (2, 5, 7, 1), (5, 5, 5, 1), (3, 3, 3, -1)])
    def test_examples(self, a, b, v, s):
        assert hilbert_symbol(a, b, v) == s

    def test_grid_matches_frozen_oracle(self, frozen):
        grid = frozen["grid"]
        for p, table in frozen["hilbert"].items():
            for i, a in enumerate(grid):
                for j, b in enumerate(grid):
                    assert hilbert_symbol(a, b, int(p)) == table[i][j], (a, b, p)

    def test_frozen_table_reproduced_by_oracle(self, frozen):
        grid = frozen["grid"]
        for i, a in enumerate(grid):
            for j, b in enumerate(grid):
                assert brute_hilbert(a, b, 5) == frozen["hilbert"]["5"][i][j]

    @given(nonzero, nonzero)
    def test_reciprocity(self, a, b):
        prod = 1
        for v in symbol_support(a, b):
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1

    @given(nonzero, nonzero, nonzero, st.sampled_from([INF, 2, 3, 5, 7, 11]))
    def test_bilinear_and_symmetric(self, a, b, c, v):
        assert hilbert_symbol(a, b * c, v) == hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v)
        assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
        assert hilbert_symbol(a, -a, v) == 1
        assert hilbert_symbol(a, 1 - a, v) == 1 if a != 1 else True

    def test_trivial_outside_support(self):
        assert hilbert_symbol(3, 5, 7) == 1 and hilbert_symbol(6, 35, 11) == 1


class TestPadic:
    def test_from_rational(self):
        x = PadicNum.from_rational(Fraction(10, 3), 5, 4)
        assert x.valuation == 1 and (x.unit * 3) % 625 == 2

    def test_arithmetic_roundtrip(self):
        x = PadicNum.from_rational(7, 5, 6)
        y = PadicNum.from_rational(Fraction(1, 5), 5, 6)
        z = (x * y) / y
        assert (z - x).is_zero

    def test_sub_precision_loss(self):
        x = PadicNum.from_rational(1, 5, 4)
        y = PadicNum.from_rational(1 + 5 ** 6, 5, 8)
        d = y - x
        assert d.is_zero and d.abs_prec == 4

    @pytest.mark.parametrize("c, p, prec, expected", [(4, 7, 4, 2), (3, 7, 4, None), (6, 5, 3, 16)])
    def test_hensel_examples(self, c, p, prec, expected):
        r = hensel_sqrt(PadicNum.from_rational(c, p, prec))
        if expected is None:
            assert r is None
        else:
            assert r.unit == expected

    def test_hensel_odd_valuation(self):
        assert hensel_sqrt(PadicNum.from_rational(5, 5, 4)) is None

    def test_hensel_at_two_rejected(self):
        with pytest.raises(PreconditionError):
            hensel_sqrt(PadicNum.from_rational(1, 2, 4))

    @given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(1, 10 ** 6), st.integers(2, 8))
    def test_hensel_squares(self, p, u, prec):
        u = u if u % p else u + 1
        c = PadicNum.from_rational(u * u, p, prec)
        r = hensel_sqrt(c)
        assert r is not None and ((r * r) - c).is_zero

    def test_bad_precision(self):
        with pytest.raises(PrecisionError):
            PadicNum(5, 0, 1, 0)

    def test_json_roundtrip(self):
        x = PadicNum.from_rational(Fraction(-2, 9), 3, 5)
        assert PadicNum.from_json(x.to_json()) == x


class TestQuadExt:
    def test_norm_and_inverse(self):
        x = QuadExtNum.from_ints(1, 1, 5, 6)       # 1 + sqrt(2)
        assert x.norm().lift() % 5 ** 6 == (1 - 2) % 5 ** 6
        one = x * x.inverse()
        assert (one.x - PadicNum.from_rational(1, 5, 6)).is_zero and one.y.is_zero

    def test_rejects_square_D(self):
        with pytest.raises(DomainError):
            QuadExtNum.from_ints(1, 1, 5, 4, D=4)

    def test_json_roundtrip(self):
        x = QuadExtNum.from_ints(3, 5, 7, 4)
        assert QuadExtNum.from_json(x.to_json()) == x

    @given(st.integers(1, 10 ** 4), st.integers(0, 10 ** 4), st.integers(1, 10 ** 4), st.integers(0, 10 ** 4))
    @settings(max_examples=50)
    def test_norm_multiplicative(self, a, b, c, d):
        p = 7
        x = QuadExtNum.from_ints(a, b, p, 6)
        y = QuadExtNum.from_ints(c, d, p, 6)
        lhs = (x * y).norm()
        rhs = x.norm() * y.norm()
        assert (lhs - rhs).is_zero


def test_valuation_and_rationals():
    assert valuation(Fraction(50, 3), 5) == 2 and valuation(Fraction(2, 9), 3) == -2
    assert as_rational("-1/12") == Fraction(-1, 12)
    assert legendre(2, 7) == 1 and legendre(3, 7) == -1
