from fractions import Fraction

import pytest
from conftest import random_qr2

from core.errors import SeriesDivisionError, SeriesDomainError
from core.exact_ring import ONE, Qr2
from core.series_engine import (
    BiSeries,
    dilate,
    even_part,
    series_sqrt,
    substitute_sign,
    symmetrize,
)

N = 8


def z(power: int = 1, tz: int = N, tt: int = N) -> BiSeries:
    return BiSeries.monomial(power, 0, tz, tt)


def t(power: int = 1, tz: int = N, tt: int = N) -> BiSeries:
    return BiSeries.monomial(0, power, tz, tt)


def random_series(rng, tz: int = 5, tt: int = 5, unit: bool = False) -> BiSeries:
    terms = {(i, j): random_qr2(rng, 4) for i in range(tz + 1) for j in range(tt + 1) if rng.random() < 0.5}
    if unit:
        terms[(0, 0)] = ONE
    return BiSeries.from_terms(terms, tz, tt)


class TestBiSeries:
    def test_sparse_storage_drops_zeros(self):
        f = BiSeries.from_terms({(0, 0): 1, (1, 1): 0, (9, 0): 5}, N, N)
        assert f.coeffs == {(0, 0): Qr2(1)}

    def test_coefficient_beyond_truncation(self):
        with pytest.raises(IndexError):
            z().coefficient(N + 1, 0)

    def test_negative_exponent_rejected(self):
        with pytest.raises(SeriesDomainError):
            BiSeries.from_terms({(-1, 0): 1}, N, N)

    def test_z_slice(self):
        f = z() * (1 + t(2)) + z(2)
        assert f.z_slice(1) == {0: ONE, 2: ONE}
        assert f.z_slice(2) == {0: ONE}

    def test_valuation(self):
        assert (z(2) * t() + z(3)).valuation() == (2, 0)
        with pytest.raises(SeriesDivisionError):
            BiSeries(N, N, {}).valuation()

    def test_first_discrepancy(self):
        f = 1 + z() + z(2) * t()
        g = 1 + z() + z(2) * t(2)
        assert f.first_discrepancy(g) == (2, 1, ONE, Qr2(0))
        assert f.agrees_with(f.truncate(N, N))


class TestArithmetic:
    def test_difference_of_squares(self):
        assert ((1 + z()) * (1 - z())).agrees_with(1 - z(2))

    def test_truncation_is_the_smaller_one(self):
        f = z(tz=3) * z(tz=5)
        assert f.trunc_z == 3
        assert f.coefficient(2, 0) == ONE

    def test_division_inverts_multiplication(self, rng):
        for _ in range(50):
            f = random_series(rng)
            g = random_series(rng, unit=True)
            assert ((f * g) / g).agrees_with(f)

    def test_division_extracts_monomial(self, rng):
        f = random_series(rng, unit=True)
        g = random_series(rng, unit=True)
        num = (f * g).shift(2, 1)
        quotient = num / g.shift(2, 1)
        assert (quotient.trunc_z, quotient.trunc_t) == (5, 5)
        assert quotient.agrees_with(f)

    def test_non_power_series_quotient(self):
        with pytest.raises(SeriesDivisionError, match="non-power-series"):
            (1 + z()) / z()

    def test_division_by_zero_series(self):
        with pytest.raises(SeriesDivisionError):
            z() / BiSeries(N, N, {})

    def test_geometric_series(self):
        inverse = BiSeries.constant(1, N, N) / (1 - z() * t())
        for i in range(N + 1):
            assert inverse.coefficient(i, i) == ONE
            assert inverse.coefficient(i, 0) == (ONE if i == 0 else 0)

    def test_scalar_division(self):
        assert (z() / 2).coefficient(1, 0) == Qr2("1/2")


class TestSqrt:
    def test_square_of_root(self, rng):
        for _ in range(5):
            f = random_series(rng, 4, 4, unit=True)
            root = series_sqrt(f)
            assert (root * root).agrees_with(f)

    def test_needs_unit_constant(self):
        with pytest.raises(SeriesDomainError):
            series_sqrt(4 + z())
        with pytest.raises(ValueError):
            series_sqrt(z())


class TestSympyOracle:
    """Univariate expansions against sympy's series."""

    @pytest.fixture
    def sp(self):
        return pytest.importorskip("sympy")

    @staticmethod
    def _coeffs(sp, expr, n):
        x = sp.Symbol("x")
        poly = sp.series(expr(x), x, 0, n + 1).removeO()
        return [Fraction(int(c.p), int(c.q)) for c in (sp.Rational(poly.coeff(x, i)) for i in range(n + 1))]

    def test_sqrt_one_plus_z(self, sp):
        root = series_sqrt(1 + z(tz=N, tt=0))
        expected = self._coeffs(sp, lambda x: sp.sqrt(1 + x), N)
        assert [root.coefficient(i, 0) for i in range(N + 1)] == expected

    def test_rational_function(self, sp):
        f = BiSeries.constant(1, N, 0) / (1 - z(tz=N, tt=0) - z(2, tz=N, tt=0))
        expected = self._coeffs(sp, lambda x: 1 / (1 - x - x**2), N)
        assert [f.coefficient(i, 0) for i in range(N + 1)] == expected

    def test_first_return_radical(self, sp):
        z2 = z(2, tz=N + 1, tt=0)
        series = (series_sqrt(1 + z2 * z2) - 1 - z2).shift(-1, 0)
        expected = self._coeffs(sp, lambda x: (-1 - x**2 + sp.sqrt(1 + x**4)) / x, N)
        assert [series.coefficient(i, 0) for i in range(N + 1)] == expected


class TestSubstitutions:
    def test_symmetrize_keeps_even_even(self):
        f = z() + z(2) * t(2) + z(2) * t()
        assert symmetrize(f).agrees_with(z(2) * t(2) * 4)
        assert even_part(f).agrees_with(z(2) * t(2))

    def test_sign_flip(self):
        f = z() * t(2)
        assert substitute_sign(f, True, False).coefficient(1, 2) == Qr2(-1)
        assert substitute_sign(f, False, True).coefficient(1, 2) == ONE

    def test_dilate(self):
        f = dilate(1 + z(tz=3, tt=1) * t(tz=3, tt=1), 2, 2)
        assert (f.trunc_z, f.trunc_t) == (7, 3)
        assert f.coefficient(2, 2) == ONE
        assert f.coefficient(1, 1) == 0
        with pytest.raises(SeriesDomainError):
            dilate(f, 0, 1)

    def test_negative_shift_needs_divisibility(self):
        assert (z(2) * t()).shift(-2, -1).coefficient(0, 0) == ONE
        with pytest.raises(SeriesDivisionError):
            (z() + t()).shift(-1, 0)
