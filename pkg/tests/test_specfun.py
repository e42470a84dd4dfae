"""
Special Function Unit Tests

특수 함수 테스트:
- 감마 함수 극점
- Bessel J (음의 인자, 차수 범위)
- Lommel S 점근 전개
- Bessel 영점
- Ai(-x)
"""

import pytest
import sys
import os
import math

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
from scipy import special

from finite_hankel.specfun import (
    airy_ai_neg, bessel_j, bessel_zero, bessel_zeros, gamma, lommel_s
)
from finite_hankel.exceptions import DomainError, UnreachableAccuracyError
from tests.closed_forms import HALF_INTEGER_BESSEL, gamma_duplication


class TestGamma:
    """감마 함수 테스트"""

    def test_integer_values(self):
        """Gamma(n) = (n-1)!"""
        assert gamma(5.0) == pytest.approx(24.0)
        assert gamma(1.0) == pytest.approx(1.0)

    def test_half(self):
        """Gamma(1/2) = sqrt(pi)"""
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi))

    def test_negative_non_integer(self):
        """음의 비정수 인자"""
        assert gamma(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi))

    @pytest.mark.parametrize('pole', [0.0, -1.0, -3.0])
    def test_poles(self, pole):
        """0 이하 정수는 극점"""
        with pytest.raises(DomainError):
            gamma(pole)

    def test_non_finite(self):
        """비유한 인자"""
        with pytest.raises(DomainError):
            gamma(float('nan'))

    @pytest.mark.parametrize('x', [0.3, 1.75, 6.5])
    def test_duplication(self, x):
        """배가 공식"""
        value = gamma(x) * gamma(x + 0.5) / gamma(2.0 * x)
        assert value == pytest.approx(gamma_duplication(x), rel=1e-12)


class TestBesselJ:
    """Bessel J 테스트"""

    def test_matches_scipy(self):
        """scipy 값과 일치"""
        x = np.linspace(0.0, 30.0, 7)
        np.testing.assert_allclose(bessel_j(1.5, x), special.jv(1.5, x))

    def test_scalar_returns_float(self):
        """스칼라 입력은 float"""
        assert isinstance(bessel_j(0.0, 1.0), float)

    def test_negative_argument_integer_order(self):
        """J_n(-x) = (-1)^n J_n(x)"""
        assert bessel_j(1.0, -2.0) == pytest.approx(-special.jv(1, 2.0))
        assert bessel_j(2.0, -2.0) == pytest.approx(special.jv(2, 2.0))

    def test_negative_argument_fractional_order(self):
        """비정수 차수의 음의 인자는 거부"""
        with pytest.raises(DomainError):
            bessel_j(0.5, -1.0)

    def test_order_below_range(self):
        """nu < -2 거부"""
        with pytest.raises(DomainError):
            bessel_j(-2.5, 1.0)

    def test_unbounded_at_zero(self):
        """J_{-1/3}(0) 은 발산"""
        with pytest.raises(DomainError):
            bessel_j(-1.0 / 3.0, 0.0)


class TestHalfIntegerOrders:
    """반정수 차수 닫힌 형태 테스트"""

    @pytest.mark.parametrize('nu', sorted(HALF_INTEGER_BESSEL))
    def test_closed_form(self, nu):
        """[0.1, 1e4] 에서 절대 오차 1e-10"""
        x = np.geomspace(0.1, 1e4, 200)
        np.testing.assert_allclose(bessel_j(nu, x), HALF_INTEGER_BESSEL[nu](x), rtol=0, atol=1e-10)

    def test_recurrence_residual(self):
        """J_{nu-1} + J_{nu+1} = (2 nu / x) J_nu"""
        x = np.geomspace(0.5, 1e3, 100)
        nu = 1.5
        residual = bessel_j(nu - 1.0, x) + bessel_j(nu + 1.0, x) - 2.0 * nu / x * bessel_j(nu, x)
        assert np.max(np.abs(residual)) <= 1e-9


class TestLommel:
    """Lommel S 점근 전개 테스트"""

    def test_terminating_series(self):
        """S_{1,0}(z) = 1 (유한 급수, 오차 0)"""
        result = lommel_s(1.0, 0.0, 7.3)
        assert result.value == pytest.approx(1.0, abs=1e-15)
        assert result.est_abs_error == 0.0

    def test_asymptotic_value(self):
        """S_{0,0}(100) ~ 1/100 - 1/100^3 + 9/100^5"""
        result = lommel_s(0.0, 0.0, 100.0)
        assert result.value == pytest.approx(0.0099990009, rel=1e-9)

    def test_small_argument_unreachable(self):
        """작은 z 에서 최적 절단 실패"""
        with pytest.raises(UnreachableAccuracyError) as exc_info:
            lommel_s(0.0, 0.0, 1.0)
        assert exc_info.value.best_bound > 0

    def test_non_positive_argument(self):
        """z <= 0 거부"""
        with pytest.raises(DomainError):
            lommel_s(0.0, 0.0, 0.0)


class TestBesselZeros:
    """Bessel 영점 테스트"""

    def test_first_zeros_order_zero(self):
        """J_0 영점"""
        zeros = bessel_zeros(0.0, 3)
        np.testing.assert_allclose(zeros, [2.404825557695773, 5.520078110286311,
                                           8.653727912911013], rtol=1e-13)

    def test_matches_scipy_integer_order(self):
        """scipy.special.jn_zeros 와 일치"""
        np.testing.assert_allclose(bessel_zeros(2.0, 20), special.jn_zeros(2, 20), rtol=1e-12)

    def test_fractional_order(self):
        """j_{1/2,k} = k pi"""
        np.testing.assert_allclose(bessel_zeros(0.5, 5), np.pi * np.arange(1, 6), rtol=1e-12)

    def test_single_zero(self):
        """k 번째 영점"""
        assert bessel_zero(0.5, 4) == pytest.approx(4.0 * math.pi, rel=1e-12)

    def test_invalid_order(self):
        """nu <= -1 거부"""
        with pytest.raises(DomainError):
            bessel_zeros(-1.0, 2)


class TestAiry:
    """Ai(-x) 테스트"""

    def test_matches_scipy(self):
        """scipy.special.airy 와 일치"""
        x = np.array([0.5, 1.0, 4.0, 20.0])
        np.testing.assert_allclose(airy_ai_neg(x), special.airy(-x)[0], rtol=1e-10)

    def test_origin(self):
        """Ai(0)"""
        assert airy_ai_neg(0.0) == pytest.approx(special.airy(0.0)[0])

    def test_negative_input(self):
        """x < 0 거부"""
        with pytest.raises(DomainError):
            airy_ai_neg(-1.0)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
