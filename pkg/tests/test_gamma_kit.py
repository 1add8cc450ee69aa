import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from wrightml.errors import DomainError
from wrightml.gamma_kit import log_abs_gamma, log_abs_recip_gamma, pochhammer, recip_gamma


def _away_from_poles(x):
    return x > 0.5 or abs(x - round(x)) > 1e-3


class TestRecipGamma:
    @pytest.mark.parametrize("x, expected", [
        (1.0, 1.0),
        (0.0, 0.0),
        (-3.0, 0.0),
        (-0.5, -1 / (2 * math.sqrt(math.pi))),
        (0.5, 1 / math.sqrt(math.pi)),
        (5.0, 1 / 24),
    ])
    def test_values(self, x, expected):
        assert recip_gamma(x) == pytest.approx(expected, rel=1e-14, abs=0)

    def test_array_shape(self):
        x = np.array([[1.0, 0.0], [-1.0, 2.0]])
        out = recip_gamma(x)
        assert out.shape == x.shape
        np.testing.assert_allclose(out, [[1, 0], [0, 1]])

    @given(st.floats(-10, 10).filter(_away_from_poles))
    def test_against_mpmath(self, x):
        ref = float(mp.rgamma(mp.mpf(x)))
        assert recip_gamma(x) == pytest.approx(ref, rel=1e-12, abs=1e-300)

    @given(st.floats(-8, 8).filter(lambda x: abs(x - round(x)) > 1e-3))
    def test_reflection(self, x):
        assert recip_gamma(x) * recip_gamma(1 - x) == pytest.approx(math.sin(math.pi * x) / math.pi, rel=1e-12)

    @pytest.mark.parametrize("n", range(6))
    @pytest.mark.parametrize("side", [-1, 1])
    def test_continuous_through_poles(self, n, side):
        # slope of 1/Gamma at -n is (-1)^n n!
        assert abs(recip_gamma(-n + side * 1e-8)) < 2e-8 * math.factorial(n)

    @pytest.mark.parametrize("k", range(5))
    def test_sign_on_negative_intervals(self, k):
        # Gamma alternates in sign on (-k-1, -k)
        xs = np.linspace(-k - 1 + 0.01, -k - 0.01, 17)
        assert np.all(np.sign(recip_gamma(xs)) == (-1) ** (k + 1))

    def test_pole_snap(self):
        assert recip_gamma(-2.0 + 1e-13) == 0.0


class TestLogAbsGamma:
    @pytest.mark.parametrize("x, lg, sign", [
        (2.0, 0.0, 1),
        (0.5, 0.5 * math.log(math.pi), 1),
        (-1.5, math.log(4 * math.sqrt(math.pi) / 3), 1),
        (-0.5, math.log(2 * math.sqrt(math.pi)), -1),
    ])
    def test_values(self, x, lg, sign):
        got, s = log_abs_gamma(x)
        assert got == pytest.approx(lg, abs=1e-14)
        assert s == sign

    @pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
    def test_poles(self, x):
        assert log_abs_gamma(x) == (math.inf, 0)
        assert log_abs_recip_gamma(x) == (-math.inf, 0)

    def test_large_argument(self):
        lg, s = log_abs_gamma(500.5)
        assert lg == pytest.approx(float(mp.loggamma(500.5)), rel=1e-14)
        assert s == 1


class TestPochhammer:
    @pytest.mark.parametrize("a, s, expected", [
        (1.0, 1.0, 1.0),
        (1.0, 0.5, math.sqrt(math.pi) / 2),
        (0.75, 0.0, 1.0),
        (0.5, 1.0, 0.5),
    ])
    def test_values(self, a, s, expected):
        assert pochhammer(a, s) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("a", [0.1, 0.5, 1.0, 2.7, 10.0])
    @pytest.mark.parametrize("m", range(13))
    def test_integer_products(self, a, m):
        assert pochhammer(a, m) == pytest.approx(math.prod(a + j for j in range(m)), rel=1e-12)

    def test_no_overflow(self):
        assert pochhammer(200.0, 300.0) == pytest.approx(float(mp.rf(200, 300)), rel=1e-12)

    @pytest.mark.parametrize("a", [0.0, -1.0])
    def test_domain(self, a):
        with pytest.raises(DomainError):
            pochhammer(a, 1.0)
