"""
Moments Module

Bessel moments consumed by the asymptotic and Filon methods.

    moment_power(mu, nu, w)        int_0^1 x^mu J_nu(w x) dx
    modified_moments               int_a^b g' g^k J_nu(w g) dx
    modified_moments_stationary    int_a^b phi^_k J_nu(w g) dx, phi^_k = g' |g|^{(k-r)/(r+1)}
    zero_case_moment               int_a^b J_nu(w g) dx around a zero of g
    generalized_moments            int_a^b (x - zeta)^j J_nu(w g) dx

Recurrences run forward only inside their stability range; entries past it
come from the reference integrator and are marked as such.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import special

from .exceptions import (
    ClassificationError, DomainError, SubdivideRequiredError, UnreachableAccuracyError,
)
from .expr import CriticalKind, ExprFunction, find_critical_points, parse
from .oracle import hankel_integral, hankel_kernel, integrate_oscillatory, kernel_value
from .settings import get_settings
from .specfun import NU_MIN, bessel_j, gamma, lommel_s

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]

# sample count for the monomial oscillator test
_MONOMIAL_SAMPLES = 9
_MONOMIAL_RTOL = 1e-12


class Provenance(Enum):
    """모멘트 값의 출처"""
    CLOSED_FORM = 'closed_form'
    RECURRENCE = 'recurrence'
    ORACLE = 'oracle'


@dataclass(frozen=True, eq=False)
class MomentTable:
    """
    모멘트 표

    values[k] 는 실수 또는 (e^{i nu pi} 분기가 포함된 경우) 복소수.
    recurrence 출처 항목은 모두 index <= stable_upto.
    """
    values: np.ndarray
    provenance: Tuple[Provenance, ...]
    stable_upto: int

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> Scalar:
        value = self.values[k]
        return complex(value) if np.iscomplexobj(self.values) else float(value)

    @property
    def is_complex(self) -> bool:
        return bool(np.iscomplexobj(self.values))

    def rows(self) -> List[Tuple[int, Scalar, Provenance, bool]]:
        """(k, value, provenance, stable) 행 목록"""
        return [(k, self[k], self.provenance[k], k <= self.stable_upto)
                for k in range(len(self))]


def branch_phase(nu: float) -> Scalar:
    """e^{i nu pi}; 정수 차수는 실수 +-1"""
    if float(nu).is_integer():
        return -1.0 if int(nu) % 2 else 1.0
    return complex(math.cos(nu * math.pi), math.sin(nu * math.pi))


def _collapse(values: np.ndarray) -> np.ndarray:
    """허수부가 크기 대비 phase_tol 이하면 실수 배열로"""
    if not np.iscomplexobj(values):
        return np.asarray(values, dtype=float)
    tol = get_settings().phase_tol
    if np.all(np.abs(values.imag) <= tol * np.maximum(np.abs(values), 1e-300)):
        return values.real.copy()
    return values


# ===== moments on [0, 1] =====

def _lommel_moment(mu: float, nu: float, omega: float) -> float:
    lead = (2.0 ** mu * gamma(0.5 * (nu + mu + 1.0))
            * float(special.rgamma(0.5 * (nu - mu + 1.0))) / omega ** (mu + 1.0))
    s_lower = lommel_s(mu - 1.0, nu - 1.0, omega).value
    s_upper = lommel_s(mu, nu, omega).value
    tail = ((mu + nu - 1.0) * bessel_j(nu, omega) * s_lower
            - bessel_j(nu - 1.0, omega) * s_upper) / omega ** mu
    return lead + tail


def _oracle_moment(mu: float, nu: float, omega: float) -> float:
    def integrand(x: np.ndarray) -> np.ndarray:
        return x ** mu * bessel_j(nu, omega * x)

    result = integrate_oscillatory(integrand, 0.0, 1.0, lambda x: np.full_like(x, omega),
                                   tol=get_settings().fallback_tol, points=(0.0,))
    return float(np.real(result.value))


def _moment_power(mu: float, nu: float, omega: float,
                  path: Optional[str] = None) -> Tuple[float, Provenance]:
    if not (math.isfinite(mu) and math.isfinite(nu) and math.isfinite(omega)):
        raise DomainError("Moment parameters must be finite")
    if mu + nu <= -1.0:
        raise DomainError(f"int_0^1 x^{mu} J_{nu} diverges (mu + nu = {mu + nu} <= -1)")
    if omega <= 0:
        raise DomainError(f"Moment frequency must be positive, got {omega}")
    if path not in (None, 'lommel', 'oracle'):
        raise ValueError(f"Unknown moment path '{path}'")

    if path != 'oracle' and nu - 1.0 >= NU_MIN:
        try:
            return _lommel_moment(mu, nu, omega), Provenance.CLOSED_FORM
        except UnreachableAccuracyError as exc:
            if path == 'lommel':
                raise
            logger.debug(f"moment_power({mu}, {nu}, {omega}): Lommel unusable ({exc}), oracle")
    elif path == 'lommel':
        raise DomainError(f"Lommel path needs J_{nu - 1}, below the supported order range")
    return _oracle_moment(mu, nu, omega), Provenance.ORACLE


def moment_power(mu: float, nu: float, omega: float, path: Optional[str] = None) -> float:
    """
    int_0^1 x^mu J_nu(omega x) dx

    Args:
        mu, nu: mu + nu > -1
        omega: frequency (> 0)
        path: None (Lommel closed form when usable, else oracle), 'lommel', 'oracle'

    Raises:
        DomainError: mu + nu <= -1 or omega <= 0
        UnreachableAccuracyError: path='lommel' and the Lommel series is unusable
    """
    return _moment_power(mu, nu, omega, path)[0]


# ===== modified moments =====

def _kernel_prime(nu: float, z: float) -> Scalar:
    """d/dz of the real-line kernel J_nu(z), with the e^{i nu pi} branch for z < 0."""
    x = abs(z)
    derivative = 0.5 * (bessel_j(nu - 1.0, x) - bessel_j(nu + 1.0, x))
    if z < 0:
        return -branch_phase(nu) * derivative
    return derivative


def _boundary_term(k: int, nu: float, omega: float, y: float) -> Scalar:
    """(k+1)/w^2 y^{k+1} J_nu(w y) - 1/w y^{k+2} J_nu'(w y); zero at y = 0 (its limit for nu > -1)."""
    if y == 0:
        return 0.0
    return ((k + 1) / (omega * omega) * y ** (k + 1) * kernel_value(nu, omega * y)
            - y ** (k + 2) * _kernel_prime(nu, omega * y) / omega)


def _segment(k: int, nu: float, omega: float, y: float) -> Tuple[Scalar, Provenance]:
    """int_0^y t^k J_nu(omega t) dt"""
    if y == 0:
        return 0.0, Provenance.CLOSED_FORM
    value, provenance = _moment_power(float(k), nu, omega * abs(y))
    scaled = abs(y) ** (k + 1) * value
    if y < 0:
        return (-1.0) ** (k + 1) * branch_phase(nu) * scaled, provenance
    return scaled, provenance


def _oracle_power(k: float, nu: float, omega: float, lo: float, hi: float) -> Scalar:
    """int_lo^hi t^k J_nu(omega t) dt"""
    def integrand(t: np.ndarray) -> np.ndarray:
        return t ** float(k) * hankel_kernel(nu, omega * t)

    points = [p for p in (lo, 0.0, hi) if min(lo, hi) <= p <= max(lo, hi)]
    result = integrate_oscillatory(integrand, lo, hi, lambda t: np.full_like(t, omega),
                                   tol=get_settings().fallback_tol, points=points)
    return result.value


def _check_no_stationary(g: ExprFunction, a: float, b: float) -> None:
    points = find_critical_points(g, a, b)
    stationary = [p for p in points if p.kind is CriticalKind.STATIONARY]
    if stationary:
        raise ClassificationError(
            f"g' vanishes on [{a}, {b}] ({stationary[0]}); use the stationary moments"
        )


def stable_limit(nu: float, omega: float) -> int:
    """Largest index the forward recurrence may produce."""
    return int(math.floor(math.sqrt(nu * nu + omega * omega) - 1.0))


def modified_moments(g: ExprFunction, a: float, b: float, nu: float, omega: float,
                     n: int) -> MomentTable:
    """
    mu_k = int_a^b g'(x) g(x)^k J_nu(omega g(x)) dx, k = 0..n-1

    mu_0, mu_1 come from moment_power after substituting y = g(x); higher
    indices follow

        mu_{k+2} = (nu^2 - (k+1)^2)/w^2 mu_k
                   + (k+1)/w^2 [y^{k+1} J_nu(w y)]_A^B - 1/w [y^{k+2} J_nu'(w y)]_A^B

    up to stable_limit(nu, omega), then the reference integrator. A zero of g
    inside [a, b] splits the closed form; the negative branch carries e^{i nu pi}.

    Raises:
        ClassificationError: g' vanishes on [a, b]
        DomainError: nu <= -1
    """
    if nu <= -1.0:
        raise DomainError(f"Modified moments require nu > -1, got {nu}")
    if n < 1:
        raise DomainError(f"Moment count must be positive, got {n}")
    limit = stable_limit(nu, omega)
    if a == b:
        return MomentTable(np.zeros(n), (Provenance.CLOSED_FORM,) * n, limit)
    _check_no_stationary(g, min(a, b), max(a, b))

    lo = float(g.evaluate(a))
    hi = float(g.evaluate(b))
    values: List[Scalar] = []
    provenance: List[Provenance] = []
    for k in range(min(n, 2)):
        upper, p_hi = _segment(k, nu, omega, hi)
        lower, p_lo = _segment(k, nu, omega, lo)
        values.append(upper - lower)
        provenance.append(Provenance.ORACLE if Provenance.ORACLE in (p_hi, p_lo)
                          else Provenance.CLOSED_FORM)

    w2 = omega * omega
    for k in range(n - 2):
        index = k + 2
        if index > limit:
            logger.debug(f"mu_{index}: past stable limit {limit} (nu={nu}, omega={omega}), oracle")
            values.append(_oracle_power(index, nu, omega, lo, hi))
            provenance.append(Provenance.ORACLE)
            continue
        boundary = _boundary_term(k, nu, omega, hi) - _boundary_term(k, nu, omega, lo)
        values.append((nu * nu - (k + 1) ** 2) / w2 * values[k] + boundary)
        provenance.append(Provenance.RECURRENCE)
        if index == limit:
            logger.debug(f"mu_{index}: recurrence reached its stable limit")

    table = MomentTable(_collapse(np.array(values)), tuple(provenance), limit)
    if table.is_complex and float(nu).is_integer():
        logger.warning(f"Imaginary residue in integer-order moments (nu={nu})")
    return table


def stationary_sign(g: ExprFunction, zeta: float, r: int) -> float:
    """sign of g^{(r+1)}(zeta)"""
    leading = g.jet(zeta, r + 2).coeffs[r + 1]
    if leading == 0:
        raise ClassificationError(f"g^({r + 1})({zeta}) vanishes; order r={r} is wrong")
    return 1.0 if leading > 0 else -1.0


def _check_stationary(g: ExprFunction, zeta: float, r: int) -> None:
    if r < 1:
        raise ClassificationError(f"Stationary order must be at least 1, got {r}")
    coeffs = np.abs(g.jet(zeta, r + 2).coeffs)
    tol = get_settings().critical_tol * (1.0 + float(np.max(coeffs)))
    if np.any(coeffs[:r + 1] > tol) or coeffs[r + 1] <= tol:
        raise ClassificationError(
            f"x={zeta} is not a type-II stationary point of order {r} (jet {coeffs})"
        )


def hat_exponent(k: int, r: int) -> float:
    """(k - r)/(r + 1)"""
    return (k - r) / (r + 1.0)


def modified_moments_stationary(g: ExprFunction, a: float, b: float, nu: float,
                                omega: float, r: int, n: int) -> MomentTable:
    """
    Moments of the stationary basis phi^_k = g' |g|^{(k-r)/(r+1)} around a
    type-II stationary point of order r at x = a.

    With B = |g(b)| and alpha_k = (k-r)/(r+1):
        mu^_k = s B^{alpha_k+1} moment_power(alpha_k, nu, omega B),  k < 2r+2
        mu^_{k+2r+2} = (nu^2 - beta^2)/w^2 mu^_k + beta B^beta J_nu(wB)/w^2
                       - B^{beta+1} J_nu'(wB)/w,  beta = (k+1)/(r+1)
    where s = 1 for g^{(r+1)}(a) > 0 and s = -e^{i nu pi} otherwise.

    Raises:
        ClassificationError: a is not a type-II stationary point of order r
        DomainError: nu <= -1/(r+1)
    """
    _check_stationary(g, a, r)
    if nu <= -1.0 / (r + 1):
        raise DomainError(f"Stationary moments require nu > {-1.0 / (r + 1):.6g}, got {nu}")
    if n < 1:
        raise DomainError(f"Moment count must be positive, got {n}")

    sign = stationary_sign(g, a, r)
    big = sign * float(g.evaluate(b))
    if big <= 0:
        raise ClassificationError(f"g changes sign on ({a}, {b}]; not a single stationary branch")
    limit = int(math.floor((r + 1) * (math.sqrt(nu * nu + omega * omega) - 1.0)))
    period = 2 * r + 2

    raw: List[float] = []
    provenance: List[Provenance] = []
    w2 = omega * omega
    for k in range(n):
        alpha = hat_exponent(k, r)
        if k < period:
            value, prov = _moment_power(alpha, nu, omega * big)
            raw.append(big ** (alpha + 1.0) * value)
            provenance.append(prov)
        elif k > limit:
            raw.append(float(np.real(_oracle_power(alpha, nu, omega, 0.0, big))))
            provenance.append(Provenance.ORACLE)
            logger.debug(f"mu^_{k}: past stable limit {limit}, oracle")
        else:
            beta = (k - period + 1) / (r + 1.0)
            derivative = 0.5 * (bessel_j(nu - 1.0, omega * big) - bessel_j(nu + 1.0, omega * big))
            raw.append((nu * nu - beta * beta) / w2 * raw[k - period]
                       + beta * big ** beta * bessel_j(nu, omega * big) / w2
                       - big ** (beta + 1.0) * derivative / omega)
            provenance.append(Provenance.RECURRENCE)

    values = np.array(raw)
    if sign < 0:
        values = -branch_phase(nu) * values
    return MomentTable(_collapse(np.asarray(values)), tuple(provenance), limit)


# ===== zero and stationary case moments =====

def zero_case_moment(g: ExprFunction, a: float, b: float, nu_plus_k: float,
                     omega: float) -> Scalar:
    """
    M(nu, omega) = int_a^b J_nu(omega g(x)) dx for an oscillator with one zero.

    Evaluated by a Filon rule on f = 1 with nodes {a, xi, b}, multiplicity 3
    each; below the crossover frequency by the reference integrator.

    Raises:
        ClassificationError: g' vanishes on [a, b]
        SubdivideRequiredError: more than one zero
    """
    points = find_critical_points(g, a, b)
    if any(p.kind is CriticalKind.STATIONARY for p in points):
        raise ClassificationError(f"Zero-case moment with a stationary point on [{a}, {b}]")
    if len(points) > 1:
        raise SubdivideRequiredError(f"{len(points)} zeros of g on [{a}, {b}]", points=points)

    settings = get_settings()
    if omega < settings.crossover_omega:
        result = hankel_integral(np.ones_like, g, a, b, nu_plus_k, omega, settings.fallback_tol)
        return _scalar(result.value)

    from .methods import Basis, FilonPlan, TransformSpec, filon

    nodes = sorted({a, b} | {p.location for p in points})
    plan = FilonPlan(tuple(nodes), (3,) * len(nodes), Basis.E)
    spec = TransformSpec(parse('1'), g, a, b, nu_plus_k, omega)
    return filon(spec, plan)


def _scalar(value) -> Scalar:
    if np.iscomplexobj(value):
        value = complex(value)
        tol = get_settings().phase_tol
        if abs(value.imag) <= tol * abs(value):
            return value.real
        return value
    return float(value)


def _monomial_coefficient(g: ExprFunction, zeta: float, a: float, b: float,
                          r: int) -> Optional[float]:
    """c when g(x) = c (x - zeta)^{r+1} on [a, b], else None"""
    c = float(g.jet(zeta, r + 2).coeffs[r + 1])
    samples = np.linspace(a, b, _MONOMIAL_SAMPLES)
    samples = samples[samples != zeta]
    actual = np.asarray(g.evaluate(samples))
    model = c * (samples - zeta) ** (r + 1)
    scale = float(np.max(np.abs(actual))) if actual.size else 0.0
    if np.all(np.abs(actual - model) <= _MONOMIAL_RTOL * max(scale, 1e-300)):
        return c
    return None


def _monomial_piece(c: float, length: float, j: int, r: int, nu: float,
                    omega: float) -> Scalar:
    """int_0^length t^j J_nu(omega c t^{r+1}) dt"""
    if length <= 0:
        return 0.0
    beta = (j + 1.0) / (r + 1.0)
    value = moment_power(beta - 1.0, nu, omega * abs(c) * length ** (r + 1))
    scaled = length ** (j + 1) * value / (r + 1.0)
    return branch_phase(nu) * scaled if c < 0 else scaled


def _generalized_moment(g: ExprFunction, zeta: float, a: float, b: float, nu: float,
                        omega: float, r: int, j: int,
                        c: Optional[float]) -> Tuple[Scalar, Provenance]:
    if nu <= -(j + 1.0) / (r + 1.0):
        raise DomainError(f"M_{j} diverges for nu={nu}, r={r}")
    if c is not None:
        right = _monomial_piece(c, b - zeta, j, r, nu, omega)
        left = _monomial_piece(c * (-1.0) ** (r + 1), zeta - a, j, r, nu, omega)
        return right + (-1.0) ** j * left, Provenance.CLOSED_FORM

    def weight(x: np.ndarray) -> np.ndarray:
        return (x - zeta) ** j

    result = hankel_integral(weight, g, a, b, nu, omega, get_settings().fallback_tol)
    return _scalar(result.value), Provenance.ORACLE


def generalized_moment(g: ExprFunction, zeta: float, a: float, b: float, nu: float,
                       omega: float, r: int, j: int) -> Scalar:
    """Single M_j(zeta, nu, omega); see generalized_moments."""
    if r < 1:
        raise ClassificationError(f"Generalized moments need a stationary order r >= 1, got {r}")
    _check_stationary(g, zeta, r)
    c = _monomial_coefficient(g, zeta, a, b, r)
    return _generalized_moment(g, zeta, a, b, nu, omega, r, j, c)[0]


def generalized_moments(g: ExprFunction, zeta: float, a: float, b: float, nu: float,
                        omega: float, r: int, j_max: int) -> MomentTable:
    """
    M_j(zeta, nu, omega) = int_a^b (x - zeta)^j J_nu(omega g(x)) dx, j = 0..j_max

    Exact through moment_power when g = c (x - zeta)^{r+1}; otherwise the
    reference integrator graded at zeta.

    Raises:
        ClassificationError: r < 1 or zeta is not stationary
        DomainError: the moment diverges (nu <= -(j+1)/(r+1))
    """
    if r < 1:
        raise ClassificationError(f"Generalized moments need a stationary order r >= 1, got {r}")
    _check_stationary(g, zeta, r)

    c = _monomial_coefficient(g, zeta, a, b, r)
    pairs = [_generalized_moment(g, zeta, a, b, nu, omega, r, j, c) for j in range(j_max + 1)]
    values = np.array([value for value, _ in pairs])
    return MomentTable(_collapse(values), tuple(p for _, p in pairs), j_max)
