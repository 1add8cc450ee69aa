import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq
from scipy.special import erfcx

from wrightml.critical import rho_of_alpha
from wrightml.entropy import (
    EntropyGen, certify_concavity, concavity_statistic, entropy, g_alpha, log_alpha,
    tail_coefficients, tail_diagnostic,
)
from wrightml.errors import DomainError
from wrightml.reports import Verdict


def sampford_statistic(z):
    """2E'^2 - E E'' for E(z) = exp(z^2) erfc(-z), at 50 digits."""
    with mp.workdps(50):
        z = mp.mpf(z)
        e0 = mp.exp(z * z) * mp.erfc(-z)
        e1 = 2 * z * e0 + 2 / mp.sqrt(mp.pi)
        e2 = 2 * e0 + 2 * z * e1
        return float(2 * e1**2 - e0 * e2)


class TestGeneralizedLog:
    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9])
    def test_one(self, alpha):
        assert log_alpha(EntropyGen(alpha), 1.0) == 0.0

    def test_natural_log(self):
        gen = EntropyGen(1.0)
        assert log_alpha(gen, math.e) == pytest.approx(1.0, rel=1e-15)
        x = np.geomspace(1e-5, 100, 30)
        np.testing.assert_allclose(log_alpha(gen, x), np.log(x), rtol=1e-14, atol=1e-15)

    def test_erfc_oracle(self):
        assert log_alpha(EntropyGen(0.5), math.e * math.erfc(1)) == pytest.approx(-1.0, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.77, 0.95])
    def test_round_trip(self, alpha):
        gen = EntropyGen(alpha)
        zs, fs = gen.inversion_table
        x = np.geomspace(fs[1], fs[-2], 40)
        z = log_alpha(gen, x) * gen.gamma_ab**2
        np.testing.assert_allclose(gen.F(z), x, rtol=1e-9)

    def test_bisection_oracle(self):
        z = brentq(lambda t: erfcx(-t) - 0.5, -10, 0, xtol=1e-15)
        assert log_alpha(EntropyGen(0.5), 0.5) == pytest.approx(z, rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, math.inf])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_alpha(EntropyGen(0.5), x)

    def test_above_table(self):
        gen = EntropyGen(0.9)
        with pytest.raises(DomainError):
            log_alpha(gen, 2 * gen.upper_limit)

    @pytest.mark.parametrize("alpha, beta", [(0.0, 0.5), (1.2, 0.0), (0.5, -0.2)])
    def test_bad_parameters(self, alpha, beta):
        with pytest.raises(DomainError):
            EntropyGen(alpha, beta)


class TestGenerator:
    @pytest.mark.parametrize("alpha", [0.1, 0.5, 0.7, 0.9, 1.0])
    def test_endpoints(self, alpha):
        gen = EntropyGen(alpha)
        assert g_alpha(gen, 0.0) == 0.0
        assert abs(g_alpha(gen, 1.0)) < 1e-10

    def test_classical(self):
        assert g_alpha(EntropyGen(1.0), 0.5) == pytest.approx(0.5 * math.log(2), rel=1e-14)

    def test_half_oracle(self):
        z = brentq(lambda t: erfcx(-t) - 0.5, -10, 0, xtol=1e-15)
        expected = -0.5 * z - 0.5 / math.sqrt(math.pi)
        got = g_alpha(EntropyGen(0.5), 0.5)
        assert got > 0
        assert got == pytest.approx(expected, rel=1e-12)

    @given(st.floats(0.05, 1.0), st.floats(0.0, 3.0))
    def test_beta_family_endpoints(self, alpha, beta):
        gen = EntropyGen(alpha, beta)
        assert g_alpha(gen, 0.0) == 0.0
        assert abs(g_alpha(gen, 1.0)) < 1e-9

    def test_beta_default(self):
        assert EntropyGen(0.3).beta == 0.7 and EntropyGen(0.3).classical
        assert not EntropyGen(0.3, 0.2).classical

    def test_domain(self):
        with pytest.raises(DomainError):
            g_alpha(EntropyGen(0.5), 1.5)


class TestEntropy:
    def test_point_mass(self):
        assert entropy(EntropyGen(0.6), [1, 0, 0, 0]) == 0.0

    def test_shannon(self):
        assert entropy(EntropyGen(1.0), np.full(4, 0.25)) == pytest.approx(math.log(4), rel=1e-14)
        assert entropy(EntropyGen(1.0), np.full(4, 0.25)) == pytest.approx(1.3862944, abs=1e-7)

    def test_uniform_maximises(self):
        gen = EntropyGen(0.7)
        rng = np.random.default_rng(2)
        top = entropy(gen, np.full(5, 0.2))
        for p in rng.dirichlet(np.ones(5), size=40):
            assert entropy(gen, p) <= top + 1e-12

    def test_concave_on_mixtures(self):
        gen = EntropyGen(0.7)
        rng = np.random.default_rng(3)
        for _ in range(20):
            p, q = rng.dirichlet(np.ones(4), size=2)
            lam = rng.uniform()
            mix = lam * p + (1 - lam) * q
            assert entropy(gen, mix) >= lam * entropy(gen, p) + (1 - lam) * entropy(gen, q) - 1e-12

    def test_permutation_invariant(self):
        gen = EntropyGen(0.4)
        p = np.array([0.1, 0.2, 0.3, 0.4])
        assert entropy(gen, p) == pytest.approx(entropy(gen, p[::-1]), rel=1e-14)

    @pytest.mark.parametrize("p", [[0.5, 0.6], [-0.1, 1.1], []])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            entropy(EntropyGen(0.5), p)


class TestConcavity:
    def test_sampford(self):
        z = -np.geomspace(1e-3, 200, 300)
        ref = np.array([sampford_statistic(t) for t in z])
        assert np.all(ref >= 0)
        D, err = concavity_statistic(EntropyGen(0.5), z)
        np.testing.assert_allclose(D, ref, rtol=1e-6)
        assert np.all(D >= -10 * err)

    def test_exponential_case(self):
        z = np.linspace(-30, 0, 31)
        D, _ = concavity_statistic(EntropyGen(1.0), z)
        np.testing.assert_allclose(D, np.exp(2 * z), rtol=1e-13)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7, 1.0])
    def test_holds(self, alpha):
        r = certify_concavity(EntropyGen(alpha))
        assert r.verdict is Verdict.HOLDS
        assert r.min_value >= -r.tolerance

    @pytest.mark.parametrize("alpha", [0.85, 0.9, 0.95])
    def test_fails(self, alpha):
        r = certify_concavity(EntropyGen(alpha))
        assert r.verdict is Verdict.FAILS
        assert r.min_value < -r.tolerance
        assert r.witness < 0
        # far out the sign is that of rho(alpha) < 0
        D, _ = concavity_statistic(EntropyGen(alpha), np.array([-500.0]))
        assert D[0] < 0

    def test_grid_recorded(self):
        r = certify_concavity(EntropyGen(0.5), grid=150, z_max=80)
        assert r.grid_spec.n == 150 and r.grid_spec.xmin == -80

    def test_grid_too_small(self):
        with pytest.raises(DomainError):
            certify_concavity(EntropyGen(0.5), grid=10)


class TestTail:
    @pytest.mark.parametrize("alpha", [0.3, 0.6, 0.7, 0.8, 0.9])
    def test_leading_coefficient(self, alpha):
        c6, _ = tail_coefficients(alpha)
        assert c6 == pytest.approx(2 * rho_of_alpha(alpha), rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.6, 0.7, 0.8, 0.9])
    @pytest.mark.parametrize("z", [-40.0, -200.0])
    def test_two_term_expansion(self, alpha, z):
        c6, c7 = tail_coefficients(alpha)
        got = tail_diagnostic(EntropyGen(alpha), z)
        # the remainder is O(z^-2) relative to c6
        assert abs(got - (c6 + c7 / z)) <= 200 * abs(c6) / z**2

    @pytest.mark.parametrize("alpha", [0.6, 0.9])
    def test_converges_to_limit(self, alpha):
        c6, _ = tail_coefficients(alpha)
        assert tail_diagnostic(EntropyGen(alpha), -2000.0) == pytest.approx(c6, rel=0.02)
