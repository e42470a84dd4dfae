"""
Expression Unit Tests

수식 언어 테스트:
- 파싱과 AST
- 값 평가 / jet 평가
- 진동자 임계점 분류
"""

import pytest
import sys
import os
import math

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import numpy as np
from scipy import special

from finite_hankel.expr import (
    BinOp, Call, CriticalKind, Neg, Num, StationaryType, Var,
    classify_oscillator, eval_jet, find_critical_points, parse
)
from finite_hankel.exceptions import (
    ClassificationError, DomainError, ExprEvaluationError, ExprSyntaxError,
    SubdivideRequiredError
)


class TestParse:
    """파싱 테스트"""

    def test_precedence(self):
        """x^2+x -> (x^2)+x"""
        fn = parse('x^2+x')
        assert fn.ast == BinOp('+', BinOp('^', Var('x'), Num(2.0)), Var('x'))

    def test_unary_minus_binds_looser_than_power(self):
        """-x^2 = -(x^2)"""
        assert parse('-x^2').ast == Neg(BinOp('^', Var('x'), Num(2.0)))

    def test_left_associative(self):
        """x-1-2 = (x-1)-2"""
        assert parse('x-1-2').ast == BinOp('-', BinOp('-', Var('x'), Num(1.0)), Num(2.0))

    def test_constants(self):
        """pi, e 는 숫자로 치환"""
        assert parse('pi').ast == Num(math.pi)
        assert parse('e').ast == Num(math.e)

    def test_function_call(self):
        """besselj(1, 2*x)"""
        fn = parse('besselj(1, 2*x)')
        assert fn.ast == Call('besselj', (Num(1.0), BinOp('*', Num(2.0), Var('x'))))

    def test_source_kept(self):
        """원본 문자열 보존"""
        assert parse('cos(x)').source == 'cos(x)'

    def test_unknown_identifier(self):
        """알 수 없는 변수"""
        with pytest.raises(ExprSyntaxError) as exc_info:
            parse('x + y')
        assert exc_info.value.position == 5

    def test_unknown_function(self):
        """알 수 없는 함수"""
        with pytest.raises(ExprSyntaxError):
            parse('tan(x)')

    def test_wrong_arity(self):
        """인자 개수 오류"""
        with pytest.raises(ExprSyntaxError):
            parse('besselj(x)')

    def test_syntax_error_position(self):
        """구문 오류는 열 위치 포함"""
        with pytest.raises(ExprSyntaxError) as exc_info:
            parse('x + * 2')
        assert exc_info.value.position is not None

    def test_empty(self):
        """빈 수식"""
        with pytest.raises(ExprSyntaxError):
            parse('   ')

    def test_round_trip_source(self):
        """str() 결과를 다시 파싱하면 같은 AST"""
        fn = parse('-x^2 + 3*sin(x)/2')
        assert parse(str(fn)).ast == fn.ast


class TestEvaluate:
    """값 평가 테스트"""

    def test_scalar(self):
        """스칼라 평가"""
        assert parse('x^2+x')(2.0) == pytest.approx(6.0)

    def test_array(self):
        """배열 평가"""
        x = np.array([0.0, 1.0, 2.0])
        np.testing.assert_allclose(parse('exp(x)').evaluate(x), np.exp(x))

    def test_constant_broadcast(self):
        """상수 함수도 입력 형태로 반환"""
        value = parse('3').evaluate(np.zeros(4))
        assert value.shape == (4,)

    def test_besselj(self):
        """besselj 평가"""
        assert parse('besselj(2, x)')(3.0) == pytest.approx(special.jv(2, 3.0))

    def test_domain_violation(self):
        """음수의 log"""
        with pytest.raises(ExprEvaluationError):
            parse('log(x)')(-1.0)

    def test_compose(self):
        """f(g(x))"""
        fn = parse('x^2').compose(parse('sin(x)'))
        assert fn(0.5) == pytest.approx(math.sin(0.5) ** 2)

    def test_depends_on_x(self):
        """x 의존성"""
        assert parse('x+1').depends_on_x()
        assert not parse('pi/2').depends_on_x()


class TestJet:
    """Jet 평가 테스트"""

    def test_polynomial_jet(self):
        """x^2+x at 2 -> [6, 5, 1]"""
        np.testing.assert_allclose(eval_jet(parse('x^2+x'), 2.0, 3).coeffs, [6.0, 5.0, 1.0])

    def test_exp_jet(self):
        """exp(x) at 1 -> e/k!"""
        jet = parse('exp(x)').jet(1.0, 4)
        np.testing.assert_allclose(jet.coeffs, [math.e, math.e, math.e / 2, math.e / 6])

    def test_sqrt_jet(self):
        """sqrt(x) at 4"""
        jet = parse('sqrt(x)').jet(4.0, 3)
        np.testing.assert_allclose(jet.coeffs, [2.0, 0.25, -1.0 / 64.0])

    def test_variable_exponent(self):
        """x^x = exp(x log x)"""
        jet = parse('x^x').jet(1.0, 3)
        np.testing.assert_allclose(jet.coeffs, [1.0, 1.0, 1.0])

    def test_derivative(self):
        """cos'(x) = -sin(x)"""
        assert parse('cos(x)').derivative(0.3) == pytest.approx(-math.sin(0.3))

    def test_second_derivative(self):
        """(x^3)'' = 6x"""
        assert parse('x^3').derivative(2.0, order=2) == pytest.approx(12.0)

    def test_singular_jet(self):
        """sqrt(x) 는 0 에서 jet 불가"""
        with pytest.raises(ExprEvaluationError):
            parse('sqrt(x)').jet(0.0, 2)


class TestClassification:
    """진동자 분류 테스트"""

    def test_no_critical_points(self):
        """g = x^2 + x 는 [1, 2] 에서 임계점 없음"""
        assert find_critical_points(parse('x^2+x'), 1.0, 2.0) == []

    def test_zero_at_endpoint(self):
        """g = x 는 x=0 에서 영점 (끝점)"""
        points = classify_oscillator(parse('x'), 0.0, 1.0)
        assert len(points) == 1
        assert points[0].kind is CriticalKind.ZERO
        assert points[0].location == 0.0
        assert points[0].at_endpoint

    def test_interior_zero(self):
        """g = x - 1/2 의 내부 영점"""
        points = find_critical_points(parse('x-0.5'), 0.0, 1.0)
        assert len(points) == 1
        assert points[0].location == pytest.approx(0.5, abs=1e-13)
        assert not points[0].at_endpoint

    def test_stationary_type_two(self):
        """g = x^3 : 0 에서 r=2 type II 정류점"""
        points = classify_oscillator(parse('x^3'), 0.0, 1.0)
        point = points[0]
        assert point.kind is CriticalKind.STATIONARY
        assert point.order_r == 2
        assert point.stationary_type is StationaryType.II

    def test_stationary_type_one(self):
        """g = x^2 + 1 : type I 정류점"""
        point = classify_oscillator(parse('x^2+1'), 0.0, 1.0)[0]
        assert point.stationary_type is StationaryType.I
        assert point.order_r == 1

    def test_interior_stationary(self):
        """g = (x-1)^2 : 내부 정류점"""
        point = classify_oscillator(parse('(x-1)^2'), 0.0, 2.0)[0]
        assert point.location == pytest.approx(1.0, abs=1e-8)
        assert point.kind is CriticalKind.STATIONARY

    def test_multiple_points_require_subdivision(self):
        """sin(x) 는 [1, 7] 에서 임계점 여러 개"""
        with pytest.raises(SubdivideRequiredError) as exc_info:
            classify_oscillator(parse('sin(x)'), 1.0, 7.0)
        assert len(exc_info.value.points) == 4

    def test_flat_oscillator(self):
        """상수 진동자는 분류 불가"""
        with pytest.raises(ClassificationError):
            find_critical_points(parse('0*x'), 0.0, 1.0)

    def test_empty_interval(self):
        """a >= b 거부"""
        with pytest.raises(DomainError):
            find_critical_points(parse('x'), 1.0, 1.0)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
