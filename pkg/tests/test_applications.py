"""
Applications Unit Tests

응용 테스트:
- Airy 변환 (두 Hankel 변환으로 환원)
- Fourier-Bessel 계수
"""

import pytest
import sys
import os
import math

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
from scipy import integrate, special, stats

from finite_hankel.applications import (
    AIRY_ORDERS, airy_reduction, airy_reference, airy_transform, fourier_bessel_coeffs
)
from finite_hankel.expr import parse
from finite_hankel.methods import FilonPlan
from finite_hankel.specfun import bessel_zeros
from finite_hankel.exceptions import DomainError, UnsupportedCaseError
from tests.closed_forms import airy_unit_limit, fourier_bessel_unit


def fourier_bessel_exact(count):
    """f = 1, b = 1, nu = 0 : a_k = 2/(j_k J_1(j_k))"""
    return fourier_bessel_unit(bessel_zeros(0.0, count))


class TestAiryReduction:
    """Airy 환원 테스트"""

    def test_reduced_problem(self):
        """t^3 진동자, omega^ = (2/3) omega^{3/2}, 차수 +-1/3"""
        scale, specs = airy_reduction(parse('1'), 4.0, 9.0)
        assert scale == pytest.approx(2.0)
        assert [spec.nu for spec in specs] == list(AIRY_ORDERS)
        assert specs[0].omega == pytest.approx(18.0)
        assert specs[0].b == pytest.approx(2.0)
        assert specs[0].g(2.0) == pytest.approx(8.0)

    def test_reduced_amplitude(self):
        """F(t) = t^2 f(t^2)"""
        _, specs = airy_reduction(parse('cos(x)'), 1.0, 10.0)
        assert specs[0].f(0.5) == pytest.approx(0.25 * math.cos(0.25))


class TestAiryTransform:
    """Airy 변환 테스트"""

    def test_constant_amplitude(self):
        """f = 1 은 정류점 전개가 정확"""
        omega = 50.0
        value = airy_transform(parse('1'), 1.0, omega, method=4)
        assert value == pytest.approx(airy_reference(parse('1'), 1.0, omega), rel=1e-8)

    def test_cosine_amplitude(self):
        """f = cos(x) 기준값 근접"""
        omega = 50.0
        value = airy_transform(parse('cos(x)'), 1.0, omega, method=4)
        assert value == pytest.approx(airy_reference(parse('cos(x)'), 1.0, omega), abs=1e-7)

    def test_oracle_method(self):
        """'oracle' 은 직접 적분"""
        omega = 20.0
        value = airy_transform(parse('1'), 1.0, omega, method='oracle')
        # int_0^1 Ai(-w x) dx = (1/w) int_0^w Ai(-t) dt
        integral, _ = integrate.quad(lambda t: special.airy(-t)[0], 0.0, omega, limit=200,
                                     epsabs=1e-13, epsrel=1e-12)
        assert value == pytest.approx(integral / omega, rel=1e-8)

    def test_unit_limit(self):
        """w I_A[1] -> 2/3"""
        omega = 1000.0
        value = omega * airy_transform(parse('1'), 1.0, omega, method=4)
        assert value == pytest.approx(airy_unit_limit(), abs=5e-2)

    def test_filon_unsupported(self):
        """Filon 계획은 지원하지 않음"""
        with pytest.raises(UnsupportedCaseError):
            airy_transform(parse('1'), 1.0, 50.0, method=FilonPlan((0.0, 1.0), (3, 3)))

    def test_invalid_interval(self):
        """b <= 0 거부"""
        with pytest.raises(DomainError):
            airy_transform(parse('1'), 0.0, 50.0)


class TestFourierBessel:
    """Fourier-Bessel 계수 테스트"""

    def test_low_modes_by_oracle(self):
        """omega < 30 은 기준 적분기"""
        series = fourier_bessel_coeffs(parse('1'), 1.0, 0.0, 5)
        np.testing.assert_allclose(series.coeffs, fourier_bessel_exact(5), rtol=1e-8)
        assert len(series) == 5

    def test_high_modes_by_filon(self):
        """omega >= 30 은 Filon (f = 1 이면 정확)"""
        series = fourier_bessel_coeffs(parse('1'), 1.0, 0.0, 15)
        assert series.zeros_used[9] > 30.0
        np.testing.assert_allclose(series.coeffs, fourier_bessel_exact(15), rtol=1e-8)

    def test_asymptotic_method(self):
        """점근 차수 지정"""
        series = fourier_bessel_coeffs(parse('1'), 1.0, 0.0, 12, method=3)
        np.testing.assert_allclose(series.coeffs, fourier_bessel_exact(12), rtol=1e-8)

    def test_orthogonality(self):
        """f = J_0(j_1 x) -> a_1 = 1, 나머지 0"""
        series = fourier_bessel_coeffs(parse('besselj(0, 2.404825557695773*x)'), 1.0, 0.0, 5)
        assert series.coefficient(1) == pytest.approx(1.0, abs=1e-6)
        np.testing.assert_allclose(series.coeffs[1:], 0.0, atol=1e-6)

    def test_coefficient_accessor(self):
        """coefficient(k) 는 1부터"""
        series = fourier_bessel_coeffs(parse('1'), 1.0, 0.0, 3)
        assert series.coefficient(1) == pytest.approx(float(series.coeffs[0]))

    def test_parallel_matches_serial(self):
        """스레드 수와 무관"""
        serial = fourier_bessel_coeffs(parse('exp(x)'), 2.0, 1.0, 12, workers=1)
        parallel = fourier_bessel_coeffs(parse('exp(x)'), 2.0, 1.0, 12, workers=4)
        np.testing.assert_allclose(parallel.coeffs, serial.coeffs, rtol=0, atol=0)

    def test_integral_decay(self):
        """int_0^1 x J_0(j_k x) dx = J_1(j_k)/j_k ~ j_k^{-3/2}"""
        series = fourier_bessel_coeffs(parse('1'), 1.0, 0.0, 40)
        k = slice(9, 40)
        fit = stats.linregress(np.log(series.zeros_used[k]), np.log(np.abs(series.integrals[k])))
        assert fit.slope == pytest.approx(-1.5, abs=0.05)

    def test_fractional_order(self):
        """nu = 1/2 : j_k = k pi, int_0^1 x J_{1/2}(j_k x) dx 는 sin 가중 적분"""
        count = 12
        series = fourier_bessel_coeffs(parse('1'), 1.0, 0.5, count)
        zeros = np.pi * np.arange(1, count + 1)
        np.testing.assert_allclose(series.zeros_used, zeros, rtol=1e-10)
        expected = [
            math.sqrt(2.0 / (math.pi * j))
            * integrate.quad(math.sqrt, 0.0, 1.0, weight='sin', wvar=j)[0]
            for j in zeros
        ]
        np.testing.assert_allclose(series.integrals, expected, rtol=1e-7)

    def test_invalid_order(self):
        """nu <= -1 거부"""
        with pytest.raises(DomainError):
            fourier_bessel_coeffs(parse('1'), 1.0, -1.0, 3)

    def test_invalid_length(self):
        """b <= 0 거부"""
        with pytest.raises(DomainError):
            fourier_bessel_coeffs(parse('1'), -1.0, 0.0, 3)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
