"""
Special Functions Module

유한 Hankel 변환에 필요한 특수 함수
- Bessel J (실수 차수, numpy 배열 지원)
- 감마 함수 (극점 검사)
- Lommel 함수 S_{mu,nu} 점근 전개 (최적 절단)
- Bessel 영점 j_{nu,k}
- Ai(-x) (두 Bessel 항등식으로 합성)
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import optimize, special

from .exceptions import DomainError, UnreachableAccuracyError
from .settings import get_settings

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# 지원 차수 하한 (모멘트 공식이 J_{nu-1}, nu > -1 을 참조)
NU_MIN = -2.0

# 종결 판정 (Pochhammer 인자가 0 이하 정수에 도달)
_TERMINATION_SNAP = 1e-12

# 무시 가능한 항 (합 대비)
_NEGLIGIBLE = 1e-17


@dataclass(frozen=True)
class SpecFunResult:
    """특수 함수 값과 절단 오차 추정"""
    value: float
    est_abs_error: float

    def __str__(self) -> str:
        return f"{self.value:.17g} (+/- {self.est_abs_error:.3g})"


def _as_output(value: np.ndarray) -> ArrayLike:
    """0차원 결과는 float로 변환"""
    if np.ndim(value) == 0:
        return float(value)
    return value


def gamma(x: float) -> float:
    """
    감마 함수

    Args:
        x: 유한 실수, 0 이하 정수 제외

    Returns:
        Gamma(x)

    Raises:
        DomainError: 극점 또는 비유한 입력
    """
    if not math.isfinite(x):
        raise DomainError(f"Gamma of non-finite argument {x}")
    if x <= 0 and float(x).is_integer():
        raise DomainError(f"Gamma has a pole at {x}")
    return float(special.gamma(x))


def bessel_j(nu: float, x: ArrayLike) -> ArrayLike:
    """
    제1종 Bessel 함수 J_nu(x)

    음의 인자는 정수 차수에서만 허용 (J_n(-x) = (-1)^n J_n(x)).
    비정수 차수의 위상 e^{i nu pi} 는 moments 모듈에서 처리.

    Args:
        nu: 차수 (nu >= -2)
        x: 인자 (스칼라 또는 배열)

    Returns:
        J_nu(x) (입력과 같은 형태)

    Raises:
        DomainError: 차수 범위 밖, 비유한 입력, 비정수 차수의 음의 인자
    """
    if not math.isfinite(nu) or nu < NU_MIN:
        raise DomainError(f"Bessel order {nu} outside [{NU_MIN}, inf)")
    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x_arr)):
        raise DomainError("Bessel argument must be finite")

    if np.any(x_arr < 0):
        if not float(nu).is_integer():
            raise DomainError(
                f"J_{nu}(x) is real-valued only for x >= 0 at non-integer order"
            )
        value = special.jv(nu, np.abs(x_arr))
        if int(nu) % 2:
            value = np.where(x_arr < 0, -value, value)
    else:
        value = special.jv(nu, x_arr)

    if not np.all(np.isfinite(value)):
        raise DomainError(f"J_{nu} is unbounded at the requested argument")
    return _as_output(value)


def _snap_pochhammer(p: float) -> float:
    """0 이하 정수에 충분히 가까우면 정수로 고정"""
    nearest = round(p)
    if nearest <= 0 and abs(p - nearest) < _TERMINATION_SNAP:
        return float(nearest)
    return p


def lommel_s(mu: float, nu: float, z: float,
             rtol: Optional[float] = None) -> SpecFunResult:
    """
    Lommel 함수 S_{mu,nu}(z) 점근 전개

    S ~ z^{mu-1} sum_m (-1)^m ((1-mu+nu)/2)_m ((1-mu-nu)/2)_m (z/2)^{-2m}

    가장 작은 항에서 절단하고, 첫 번째 생략 항을 오차로 보고.
    Pochhammer 인자가 0이 되면 급수는 유한하며 오차는 0.

    Args:
        mu: 첫 번째 매개변수
        nu: 두 번째 매개변수
        z: 인자 (> 0)
        rtol: 선행항 대비 허용 상대오차 (기본: 설정값)

    Returns:
        SpecFunResult

    Raises:
        DomainError: z <= 0 또는 비유한 입력
        UnreachableAccuracyError: 최적 절단으로도 rtol 미달
    """
    if not (math.isfinite(mu) and math.isfinite(nu) and math.isfinite(z)):
        raise DomainError("Lommel parameters must be finite")
    if z <= 0:
        raise DomainError(f"Lommel asymptotic requires z > 0, got {z}")
    if rtol is None:
        rtol = get_settings().lommel_rtol

    a = _snap_pochhammer(0.5 * (1.0 - mu + nu))
    b = _snap_pochhammer(0.5 * (1.0 - mu - nu))
    leading = z ** (mu - 1.0)
    q = (2.0 / z) ** 2

    total = 0.0
    term = 1.0
    omitted = 0.0
    m = 0
    while True:
        ratio = -(a + m) * (b + m) * q
        if ratio == 0.0:
            total += term
            omitted = 0.0
            break
        next_term = term * ratio
        if abs(next_term) >= abs(term):
            # term 이 최소항: 생략
            omitted = abs(term)
            break
        total += term
        if abs(next_term) <= _NEGLIGIBLE * abs(total):
            omitted = abs(next_term)
            break
        term = next_term
        m += 1

    value = leading * total
    est = abs(leading) * omitted
    if est > rtol * abs(leading):
        raise UnreachableAccuracyError(
            f"Lommel S({mu}, {nu}, {z}): best truncation error {est:.3e} "
            f"exceeds {rtol:.1e} relative",
            best_bound=est,
        )
    logger.debug(f"lommel_s({mu}, {nu}, {z}) truncated after {m + 1} terms")
    return SpecFunResult(value=value, est_abs_error=est)


def _mcmahon(nu: float, k: int) -> float:
    """McMahon 전개에 의한 j_{nu,k} 초기 추정"""
    beta = (k + 0.5 * nu - 0.25) * math.pi
    mu = 4.0 * nu * nu
    eight_beta = 8.0 * beta
    return (beta - (mu - 1.0) / eight_beta
            - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * eight_beta ** 3))


def bessel_zeros(nu: float, count: int) -> np.ndarray:
    """
    J_nu 의 처음 count 개 양의 영점

    격자 부호 변화로 구간을 잡고 brentq 로 정밀화.

    Args:
        nu: 차수 (> -1)
        count: 영점 개수 (>= 1)

    Returns:
        증가 순서의 영점 배열

    Raises:
        DomainError: nu <= -1 또는 count < 1
    """
    if not math.isfinite(nu) or nu <= -1.0:
        raise DomainError(f"Bessel zeros require nu > -1, got {nu}")
    if count < 1:
        raise DomainError(f"Zero count must be positive, got {count}")

    step = get_settings().zero_scan_step
    upper = max(_mcmahon(nu, count), count * math.pi) + 4.0 * math.pi

    def jv(t: float) -> float:
        return float(special.jv(nu, t))

    while True:
        grid = np.concatenate(([min(step, 1e-3)], np.arange(step, upper, step)))
        values = special.jv(nu, grid)
        crossings = np.nonzero(values[:-1] * values[1:] < 0)[0]
        if len(crossings) >= count:
            break
        upper *= 1.5

    roots = np.array([
        optimize.brentq(jv, grid[i], grid[i + 1], xtol=1e-15,
                        rtol=4 * np.finfo(float).eps)
        for i in crossings[:count]
    ])
    logger.debug(f"bessel_zeros({nu}, {count}) scanned up to {upper:.1f}")
    return roots


def bessel_zero(nu: float, k: int) -> float:
    """
    J_nu 의 k 번째 양의 영점 j_{nu,k}

    Args:
        nu: 차수 (> -1)
        k: 영점 번호 (1부터)

    Returns:
        j_{nu,k}
    """
    return float(bessel_zeros(nu, k)[-1])


def airy_ai_neg(x: ArrayLike) -> ArrayLike:
    """
    Ai(-x), x >= 0

    Ai(-x) = (sqrt(x)/3) [J_{1/3}(2/3 x^{3/2}) + J_{-1/3}(2/3 x^{3/2})]

    Args:
        x: 0 이상 인자

    Returns:
        Ai(-x)
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0) or not np.all(np.isfinite(x_arr)):
        raise DomainError("airy_ai_neg requires finite x >= 0")
    ai_zero = 1.0 / (3.0 ** (2.0 / 3.0) * special.gamma(2.0 / 3.0))
    safe = np.where(x_arr > 0, x_arr, 1.0)
    zeta = (2.0 / 3.0) * safe ** 1.5
    value = np.sqrt(safe) / 3.0 * (bessel_j(1.0 / 3.0, zeta)
                                   + bessel_j(-1.0 / 3.0, zeta))
    return _as_output(np.where(x_arr > 0, value, ai_zero))
