"""
Moments Unit Tests

Bessel 모멘트 테스트:
- [0, 1] 거듭제곱 모멘트 (Lommel / 기준 적분기)
- 수정 모멘트 (일반 / 정류점 기저)
- 영점 모멘트, 일반화 모멘트
"""

import pytest
import sys
import os
import math

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
from scipy import integrate, special

from finite_hankel.expr import parse
from finite_hankel.moments import (
    Provenance, branch_phase, generalized_moment, generalized_moments, hat_exponent,
    modified_moments, modified_moments_stationary, moment_power, stable_limit,
    zero_case_moment
)
from finite_hankel.oracle import hankel_integral
from finite_hankel.exceptions import (
    ClassificationError, DomainError, UnreachableAccuracyError
)
from tests.closed_forms import moment_j1, moment_next_order


class TestMomentPower:
    """int_0^1 x^mu J_nu(w x) dx 테스트"""

    @pytest.mark.parametrize('nu', [0.0, 1.0, 2.5])
    def test_closed_form_identity(self, nu):
        """mu = nu + 1 : J_{nu+1}(w)/w"""
        omega = 100.0
        value = moment_power(nu + 1.0, nu, omega)
        assert value == pytest.approx(moment_next_order(nu, omega), rel=1e-10)

    def test_lommel_matches_oracle(self):
        """Lommel 경로와 기준 적분기 일치"""
        lommel = moment_power(0.0, 0.0, 100.0, path='lommel')
        oracle = moment_power(0.0, 0.0, 100.0, path='oracle')
        assert lommel == pytest.approx(oracle, rel=1e-8)

    def test_small_frequency_falls_back(self):
        """작은 omega 는 기준 적분기로 대체"""
        value = moment_power(0.0, 0.0, 2.0)
        expected, _ = integrate.quad(lambda x: special.j0(2.0 * x), 0.0, 1.0, epsabs=1e-14)
        assert value == pytest.approx(expected, rel=1e-9)

    def test_forced_lommel_unreachable(self):
        """path='lommel' 은 대체하지 않음"""
        with pytest.raises(UnreachableAccuracyError):
            moment_power(0.5, 0.0, 1.0, path='lommel')

    def test_divergent(self):
        """mu + nu <= -1 은 발산"""
        with pytest.raises(DomainError):
            moment_power(-1.5, 0.4, 10.0)

    def test_unknown_path(self):
        """알 수 없는 경로"""
        with pytest.raises(ValueError):
            moment_power(0.0, 0.0, 10.0, path='series')


class TestModifiedMoments:
    """mu_k = int_a^b g' g^k J_nu(w g) 테스트"""

    def test_linear_oscillator_against_oracle(self):
        """g = x on [1, 2]"""
        g = parse('x')
        table = modified_moments(g, 1.0, 2.0, 1.0, 100.0, 5)
        for k in range(5):
            expected = hankel_integral(lambda x, k=k: x ** k, g, 1.0, 2.0, 1.0, 100.0,
                                       tol=1e-12).value
            assert table[k] == pytest.approx(expected, rel=1e-8, abs=1e-14)

    def test_provenance(self):
        """처음 둘은 닫힌 형태, 나머지는 점화식"""
        table = modified_moments(parse('x'), 1.0, 2.0, 1.0, 100.0, 4)
        assert table.provenance[:2] == (Provenance.CLOSED_FORM, Provenance.CLOSED_FORM)
        assert table.provenance[2:] == (Provenance.RECURRENCE, Provenance.RECURRENCE)
        assert table.stable_upto == stable_limit(1.0, 100.0) == 99

    def test_past_stable_limit_uses_oracle(self):
        """안정 한계 이후는 기준 적분기"""
        g = parse('x')
        table = modified_moments(g, 1.0, 2.0, 0.0, 3.0, 5)
        assert table.stable_upto == 2
        assert table.provenance[3] is Provenance.ORACLE
        assert table.provenance[4] is Provenance.ORACLE
        expected = hankel_integral(lambda x: x ** 4, g, 1.0, 2.0, 0.0, 3.0, tol=1e-12).value
        assert table[4] == pytest.approx(expected, rel=1e-9)
        rows = table.rows()
        assert rows[4][3] is False

    def test_nonlinear_oscillator(self):
        """g = x^2 + x on [1, 2]"""
        g = parse('x^2+x')
        table = modified_moments(g, 1.0, 2.0, 0.0, 50.0, 3)
        for k in range(3):
            expected = hankel_integral(lambda x, k=k: (2 * x + 1) * (x ** 2 + x) ** k, g,
                                       1.0, 2.0, 0.0, 50.0, tol=1e-12).value
            assert table[k] == pytest.approx(expected, rel=1e-8, abs=1e-14)

    def test_zero_endpoint_fractional_order(self):
        """g(a) = 0, 0 < nu < 1 : 경계항은 y = 0 에서 극한값 0"""
        g = parse('x')
        table = modified_moments(g, 0.0, 1.0, 0.5, 100.0, 3)
        assert table.provenance[2] is Provenance.RECURRENCE
        for k in range(3):
            expected = hankel_integral(lambda x, k=k: x ** k, g, 0.0, 1.0, 0.5, 100.0,
                                       tol=1e-12).value
            assert table[k] == pytest.approx(expected, rel=1e-8, abs=1e-14)

    def test_stationary_rejected(self):
        """g' 영점이 있으면 거부"""
        with pytest.raises(ClassificationError):
            modified_moments(parse('x^2'), 0.0, 1.0, 0.0, 10.0, 3)

    def test_order_below_range(self):
        """nu <= -1 거부"""
        with pytest.raises(DomainError):
            modified_moments(parse('x'), 1.0, 2.0, -1.0, 10.0, 3)


class TestStationaryMoments:
    """정류점 기저 모멘트 테스트"""

    def test_exponent(self):
        """alpha_k = (k - r)/(r + 1)"""
        assert hat_exponent(0, 1) == pytest.approx(-0.5)
        assert hat_exponent(5, 2) == pytest.approx(1.0)

    def test_square_against_oracle(self):
        """g = x^2 : mu^_k = int_0^1 2 x^k J_nu(w x^2) dx"""
        g = parse('x^2')
        nu, omega = 0.5, 50.0
        table = modified_moments_stationary(g, 0.0, 1.0, nu, omega, 1, 6)
        assert table.provenance[4] is Provenance.RECURRENCE
        for k in range(6):
            expected = hankel_integral(lambda x, k=k: 2.0 * x ** k, g, 0.0, 1.0, nu, omega,
                                       tol=1e-12).value
            assert table[k] == pytest.approx(expected, rel=1e-8, abs=1e-14)

    def test_negative_leading_coefficient(self):
        """g^{(r+1)}(a) < 0 : -e^{i nu pi} 배"""
        nu = 0.5
        positive = modified_moments_stationary(parse('x^2'), 0.0, 1.0, nu, 50.0, 1, 3)
        negative = modified_moments_stationary(parse('-x^2'), 0.0, 1.0, nu, 50.0, 1, 3)
        assert negative.is_complex
        for k in range(3):
            assert negative[k] == pytest.approx(-branch_phase(nu) * positive[k])

    def test_existence_bound(self):
        """nu <= -1/(r+1) 거부"""
        with pytest.raises(DomainError):
            modified_moments_stationary(parse('x^2'), 0.0, 1.0, -0.6, 50.0, 1, 3)

    def test_not_stationary(self):
        """a 가 정류점이 아님"""
        with pytest.raises(ClassificationError):
            modified_moments_stationary(parse('x'), 0.0, 1.0, 0.0, 50.0, 1, 3)


class TestBranchPhase:
    """e^{i nu pi} 테스트"""

    def test_integer_orders_real(self):
        """정수 차수는 실수 +-1"""
        assert branch_phase(1.0) == -1.0
        assert branch_phase(2.0) == 1.0

    def test_half_order(self):
        """nu = 1/2 -> i"""
        assert branch_phase(0.5) == pytest.approx(1j)


class TestZeroCaseMoment:
    """영점 모멘트 테스트"""

    def test_high_frequency_filon(self):
        """int_0^1 J_1(w x) dx = (1 - J_0(w))/w"""
        omega = 100.0
        value = zero_case_moment(parse('x'), 0.0, 1.0, 1.0, omega)
        assert value == pytest.approx(moment_j1(omega), rel=1e-9)

    def test_low_frequency_oracle(self):
        """crossover 미만은 기준 적분기"""
        omega = 10.0
        value = zero_case_moment(parse('x'), 0.0, 1.0, 1.0, omega)
        assert value == pytest.approx(moment_j1(omega), rel=1e-9)


class TestGeneralizedMoments:
    """int_a^b (x - zeta)^j J_nu(w g) 테스트"""

    def test_symmetric_square(self):
        """g = x^2 on [-1, 1]: 짝수 j 는 두 배, 홀수 j 는 0"""
        g = parse('x^2')
        table = generalized_moments(g, 0.0, -1.0, 1.0, 0.0, 100.0, 1, 1)
        expected = hankel_integral(np.ones_like, g, -1.0, 1.0, 0.0, 100.0, tol=1e-12).value
        assert table[0] == pytest.approx(expected, rel=1e-8)
        assert table[1] == pytest.approx(0.0, abs=1e-14)
        assert table.provenance[0] is Provenance.CLOSED_FORM

    def test_general_oscillator_uses_oracle(self):
        """단항식이 아니면 기준 적분기"""
        g = parse('x^2+x^3')
        table = generalized_moments(g, 0.0, 0.0, 0.5, 0.0, 100.0, 1, 1)
        assert table.provenance == (Provenance.ORACLE, Provenance.ORACLE)

    def test_single_moment(self):
        """generalized_moment 는 표의 한 항목"""
        g = parse('x^2')
        table = generalized_moments(g, 0.0, 0.0, 1.0, 0.5, 80.0, 1, 2)
        assert generalized_moment(g, 0.0, 0.0, 1.0, 0.5, 80.0, 1, 2) == pytest.approx(table[2])

    def test_divergent_moment(self):
        """nu <= -(j+1)/(r+1) 거부"""
        with pytest.raises(DomainError):
            generalized_moment(parse('x^3'), 0.0, 0.0, 1.0, -0.5, 80.0, 2, 0)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
