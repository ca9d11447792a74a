"""Oracle tests for the modified Bessel routine.

Primary oracles are the half-integer closed forms

    K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
    K_{3/2}(z) = sqrt(pi/(2z)) e^{-z} (1 + 1/z)
    K_{5/2}(z) = sqrt(pi/(2z)) e^{-z} (1 + 3/z + 3/z^2)

computed here from scratch, plus the small-argument asymptote
K_nu(z) ~ 2^{nu-1} Gamma(nu) z^{-nu}.  scipy.special.kv serves only as an
independent cross-check implementation, never as part of the library.
"""

import math

import numpy as np
import pytest
import scipy.special

from qsispace.bessel import bessel_k, NU_MAX, NU_MIN, Z_MAX
from qsispace.errors import DomainError


def k_half(z):
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z)


def k_three_halves(z):
    return k_half(z) * (1.0 + 1.0 / z)


def k_five_halves(z):
    return k_half(z) * (1.0 + 3.0 / z + 3.0 / z**2)


class TestClosedForms:
    @pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 5.0, 10.0])
    def test_order_one_half(self, z):
        assert bessel_k(0.5, z) == pytest.approx(k_half(z), rel=1e-10)

    def test_frozen_value_at_one(self):
        # sqrt(pi/2) * exp(-1), frozen to machine precision.
        assert bessel_k(0.5, 1.0) == pytest.approx(0.4610685044478946, rel=1e-12)

    @pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 5.0, 10.0, 40.0])
    def test_order_three_halves(self, z):
        assert bessel_k(1.5, z) == pytest.approx(k_three_halves(z), rel=1e-10)

    @pytest.mark.parametrize("z", [0.5, 1.0, 3.0, 20.0, 100.0])
    def test_order_five_halves(self, z):
        assert bessel_k(2.5, z) == pytest.approx(k_five_halves(z), rel=1e-10)


class TestCrossCheck:
    def test_against_scipy_grid(self):
        # Independent implementation comparison over the validated window.
        for nu in [0.5, 1.0, 2.5, 7.0, 15.5, 30.0, 40.0]:
            for z in [0.01, 0.1, 1.0, 10.0, 100.0]:
                ref = scipy.special.kv(nu, z)
                assert bessel_k(nu, z) == pytest.approx(ref, rel=1e-10), (nu, z)

    def test_small_argument_asymptote(self):
        # K_nu(z) ~ 2^{nu-1} Gamma(nu) z^{-nu}; relative correction O(z^2).
        nu, z = 3.0, 1e-3
        lead = 2.0 ** (nu - 1.0) * math.gamma(nu) * z ** (-nu)
        assert bessel_k(nu, z) == pytest.approx(lead, rel=1e-6)

    def test_monotone_decreasing_in_argument(self):
        zs = np.array([0.2, 0.5, 1.0, 2.0, 5.0, 20.0, 80.0])
        vals = bessel_k(4.5, zs)
        assert np.all(np.diff(vals) < 0)


class TestInterface:
    def test_array_in_array_out(self):
        zs = np.array([0.5, 1.0, 2.0])
        vals = bessel_k(0.5, zs)
        assert isinstance(vals, np.ndarray) and vals.shape == (3,)
        expected = np.array([k_half(z) for z in zs])
        np.testing.assert_allclose(vals, expected, rtol=1e-10)

    def test_scalar_in_scalar_out(self):
        assert isinstance(bessel_k(1.5, 2.0), float)

    @pytest.mark.parametrize("nu", [0.3, 0.0, -1.0, 40.5, 100.0])
    def test_order_out_of_range(self, nu):
        with pytest.raises(DomainError):
            bessel_k(nu, 1.0)

    @pytest.mark.parametrize("z", [0.0, -1.0, 100.5, 1e6])
    def test_argument_out_of_range(self, z):
        with pytest.raises(DomainError):
            bessel_k(1.5, z)

    def test_overflow_guard(self):
        # Large order with a microscopic argument drives the integrand's
        # peak beyond double range; must refuse rather than return inf/nan.
        with pytest.raises(DomainError):
            bessel_k(40.0, 1e-8)

    def test_range_constants(self):
        assert (NU_MIN, NU_MAX, Z_MAX) == (0.5, 40.0, 100.0)
