"""
Reference Integrator Unit Tests

기준 적분기 테스트:
- 진동 적분 정확도
- 비용/허용오차 보호
- 음의 인자 Bessel 커널
"""

import pytest
import sys
import os
import math

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
from scipy import special

from finite_hankel.expr import parse
from finite_hankel.methods import TransformSpec
from finite_hankel.oracle import (
    hankel_integral, hankel_kernel, integrate_oscillatory, kernel_value, reference_hankel
)
from finite_hankel.exceptions import OracleCostError, ToleranceError


class TestIntegrateOscillatory:
    """진동 적분 테스트"""

    def test_polynomial(self):
        """int_0^1 x^2 = 1/3"""
        result = integrate_oscillatory(lambda x: x ** 2, 0.0, 1.0)
        assert result.value == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_cosine(self):
        """int_0^100 cos(x) = sin(100)"""
        result = integrate_oscillatory(np.cos, 0.0, 100.0, lambda x: np.ones_like(x))
        assert result.value == pytest.approx(math.sin(100.0), abs=1e-9)
        assert result.panels_used > 32

    def test_reversed_interval(self):
        """a > b 는 부호 반전"""
        forward = integrate_oscillatory(np.exp, 0.0, 1.0)
        backward = integrate_oscillatory(np.exp, 1.0, 0.0)
        assert backward.value == pytest.approx(-forward.value)

    def test_empty_interval(self):
        """a == b 는 0"""
        assert integrate_oscillatory(np.exp, 2.0, 2.0).value == 0.0

    def test_endpoint_singularity(self):
        """int_0^1 x^{-1/2} = 2 (끝점 세분)"""
        result = integrate_oscillatory(lambda x: x ** -0.5, 0.0, 1.0, points=(0.0,))
        assert result.value == pytest.approx(2.0, rel=1e-8)

    def test_tolerance_floor(self):
        """1e-13 미만 허용오차 거부"""
        with pytest.raises(ToleranceError):
            integrate_oscillatory(np.exp, 0.0, 1.0, tol=1e-15)

    def test_cost_guard(self):
        """총 위상이 상한 초과"""
        with pytest.raises(OracleCostError):
            integrate_oscillatory(np.cos, 0.0, 1.0, lambda x: np.full_like(x, 1e9))


class TestHankelIntegral:
    """Hankel 적분 테스트"""

    def test_closed_form(self):
        """int_0^1 x J_0(w x) dx = J_1(w)/w"""
        omega = 50.0
        spec = TransformSpec(parse('x'), parse('x'), 0.0, 1.0, 0.0, omega)
        result = reference_hankel(spec)
        assert result.value == pytest.approx(special.jv(1, omega) / omega, rel=1e-9)

    def test_power_closed_form(self):
        """int_0^b x^{nu+1} J_nu(w x) dx = b^{nu+1} J_{nu+1}(w b)/w"""
        nu, omega, b = 1.5, 200.0, 2.0
        result = hankel_integral(lambda x: x ** (nu + 1), parse('x'), 0.0, b, nu, omega)
        expected = b ** (nu + 1) * special.jv(nu + 1, omega * b) / omega
        assert result.value == pytest.approx(expected, rel=1e-8)

    def test_error_estimate_reported(self):
        """오차 추정과 패널 수 보고"""
        spec = TransformSpec(parse('cos(x)'), parse('x^2+x'), 1.0, 2.0, 1.0, 100.0)
        result = reference_hankel(spec)
        assert result.est_abs_error >= 0.0
        assert result.levels >= 2

    def test_frequency_guard(self):
        """omega max|g| 가 상한 초과"""
        with pytest.raises(OracleCostError):
            hankel_integral(np.ones_like, parse('x'), 0.0, 1.0, 0.0, 1e8)


class TestKernel:
    """실수축 Bessel 커널 테스트"""

    def test_positive_argument(self):
        """양의 인자는 J_nu"""
        z = np.array([0.5, 2.0])
        np.testing.assert_allclose(hankel_kernel(0.5, z), special.jv(0.5, z))

    def test_integer_order_negative(self):
        """정수 차수는 실수"""
        value = kernel_value(1.0, -2.0)
        assert isinstance(value, float)
        assert value == pytest.approx(-special.jv(1, 2.0))

    def test_fractional_order_negative(self):
        """J_nu(-z) = e^{i nu pi} J_nu(z)"""
        value = kernel_value(0.5, -2.0)
        expected = complex(math.cos(0.5 * math.pi), math.sin(0.5 * math.pi)) * special.jv(0.5, 2.0)
        assert isinstance(value, complex)
        assert value == pytest.approx(expected)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
