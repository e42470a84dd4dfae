"""
Applications Module

유한 Hankel 변환으로 환원되는 응용
- Airy 변환: int_0^b f(x) Ai(-omega x) dx
- Fourier-Bessel 계수: a_k = 2/[b J_{nu+1}(j_k)]^2 int_0^b x f(x) J_nu(j_k x/b) dx
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .exceptions import DomainError, UnsupportedCaseError
from .expr import BinOp, ExprFunction, Var, parse
from .methods import (
    FilonPlan, Position, TransformSpec, asymptotic_stationary, asymptotic_zero, filon,
)
from .oracle import integrate_oscillatory, reference_hankel
from .settings import get_settings
from .specfun import airy_ai_neg, bessel_j, bessel_zeros

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]

# int (asymptotic order m), FilonPlan, or 'oracle'
MethodChoice = Union[int, FilonPlan, str]

AIRY_ORDERS = (1.0 / 3.0, -1.0 / 3.0)


def _times(left: ExprFunction, right: ExprFunction) -> ExprFunction:
    return ExprFunction(BinOp('*', left.ast, right.ast))


def airy_reduction(f: ExprFunction, b: float, omega: float):
    """
    Airy 적분을 두 Hankel 변환으로 환원

    Returns:
        (scale, [TransformSpec for nu = 1/3, -1/3])
        I_A = scale * (H_{1/3} + H_{-1/3}), oscillator t^3 on [0, sqrt(b)]
    """
    square = parse('x^2')
    integrand = _times(square, f.compose(square))
    frequency = (2.0 / 3.0) * omega ** 1.5
    specs = [TransformSpec(integrand, parse('x^3'), 0.0, math.sqrt(b), nu, frequency)
             for nu in AIRY_ORDERS]
    return 2.0 * math.sqrt(omega) / 3.0, specs


def airy_reference(f: ExprFunction, b: float, omega: float,
                   tol: Optional[float] = None) -> float:
    """Ai(-x) 두 Bessel 항등식으로 직접 적분 (기준값)"""
    def integrand(x: np.ndarray) -> np.ndarray:
        return f.evaluate(x) * airy_ai_neg(omega * x)

    def rate(x: np.ndarray) -> np.ndarray:
        return omega ** 1.5 * np.sqrt(x)

    result = integrate_oscillatory(integrand, 0.0, b, rate, tol, points=(0.0, b))
    return float(np.real(result.value))


def airy_transform(f: ExprFunction, b: float, omega: float,
                   method: MethodChoice = 4) -> float:
    """
    Airy 변환 I_A = int_0^b f(x) Ai(-omega x) dx

    Args:
        f: 함수
        b: 상한 (> 0)
        omega: 주파수 (> 0)
        method: 점근 차수 m (정수) 또는 'oracle'

    Returns:
        I_A

    Raises:
        UnsupportedCaseError: Filon 계획 (nu = -1/3 의 0차 hat 모멘트가 발산)
    """
    if b <= 0 or omega <= 0:
        raise DomainError(f"Airy transform needs b > 0 and omega > 0, got b={b}, omega={omega}")
    if isinstance(method, FilonPlan):
        raise UnsupportedCaseError(
            "Filon rules for the Airy reduction need the zeroth moment of J_{-1/3}(w t^3), which diverges"
        )
    if method == 'oracle':
        return airy_reference(f, b, omega)
    if not isinstance(method, int):
        raise ValueError(f"Unknown Airy method {method!r}")

    scale, specs = airy_reduction(f, b, omega)
    logger.info(f"airy_transform: omega_hat={specs[0].omega:.6g}, m={method}")
    total = sum(asymptotic_stationary(spec, 0.0, 2, method, Position.LEFT_ENDPOINT)
                for spec in specs)
    return float(np.real(scale * total))


@dataclass(frozen=True, eq=False)
class FourierBesselSeries:
    """Fourier-Bessel 계수 a_1..a_K"""
    nu: float
    b: float
    coeffs: np.ndarray
    zeros_used: np.ndarray
    integrals: np.ndarray

    def __len__(self) -> int:
        return len(self.coeffs)

    def coefficient(self, k: int) -> float:
        """a_k (k 는 1부터)"""
        return float(self.coeffs[k - 1])


def _fourier_bessel_integral(spec: TransformSpec, method: MethodChoice) -> float:
    if spec.omega < get_settings().crossover_omega or method == 'oracle':
        return float(np.real(reference_hankel(spec).value))
    if isinstance(method, FilonPlan):
        return float(np.real(filon(spec, method)))
    return float(np.real(asymptotic_zero(spec, 0.0, int(method))))


def fourier_bessel_coeffs(f: ExprFunction, b: float, nu: float, count: int,
                          method: Optional[MethodChoice] = None,
                          workers: int = 1) -> FourierBesselSeries:
    """
    Fourier-Bessel 계수 계산

    각 a_k 는 g(x) = x, xi = 0, omega = j_{nu,k}/b, 피적분 x f(x) 인
    영점 경우의 변환. omega < 30 은 기준 적분기 사용.

    Args:
        f: 함수
        b: 구간 길이 (> 0)
        nu: 차수 (> -1)
        count: 계수 개수 K
        method: 점근 차수 m, FilonPlan, 'oracle' (기본: 노드 {0, b/2, b} 중복도 3)
        workers: 병렬 스레드 수

    Returns:
        FourierBesselSeries
    """
    if b <= 0:
        raise DomainError(f"Fourier-Bessel interval length must be positive, got {b}")
    if nu <= -1.0:
        raise DomainError(f"Fourier-Bessel series requires nu > -1, got {nu}")
    if method is None:
        method = FilonPlan((0.0, 0.5 * b, b), (3, 3, 3))

    zeros = bessel_zeros(nu, count)
    integrand = _times(parse('x'), f)
    oscillator = ExprFunction(Var('x'))
    specs = [TransformSpec(integrand, oscillator, 0.0, b, nu, j / b) for j in zeros]

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        integrals = np.array(list(pool.map(lambda s: _fourier_bessel_integral(s, method), specs)))

    norms = 2.0 / (b * np.asarray(bessel_j(nu + 1.0, zeros))) ** 2
    logger.info(f"fourier_bessel_coeffs: {count} coefficients, nu={nu}, b={b}")
    return FourierBesselSeries(nu=nu, b=b, coeffs=norms * integrals,
                               zeros_used=zeros, integrals=integrals)
