"""
Methods Module

Quadrature rules for H_nu[f] = int_a^b f(x) J_nu(omega g(x)) dx.

Asymptotic truncations Q_m^A:
- asymptotic_plain       no critical point on [a, b]
- asymptotic_zero        one zero xi of g
- asymptotic_stationary  type-II stationary point of order r (left endpoint or interior)

Modified Filon rules Q^F interpolate f by Hermite data in
    E:  phi_k = g' y^k,            y = g
    E^: phi^_k = s (r+1) y' y^k,   y = (s g)^{1/(r+1)}, s = sign g^{(r+1)}(a)
and integrate the interpolant exactly with modified moments.

Each method re-classifies the oscillator and refuses a mismatched case.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

from .exceptions import (
    ClassificationError, ConditioningError, DomainError, PlanError,
    UnsupportedCaseError, WrongMethodError,
)
from .expr import CriticalKind, CriticalPoint, ExprFunction, StationaryType, find_critical_points
from .jets import Jet, jet_mul, jet_power, jet_shift_div_power, jet_shift_up
from .moments import (
    generalized_moment, modified_moments, modified_moments_stationary,
    stationary_sign, zero_case_moment,
)
from .oracle import OracleResult, hankel_integral, kernel_value
from .settings import get_settings
from .sigma import plain_sequence, sigma_hat, sigma_plain, sigma_tilde

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]

# node and critical point coincidence, relative to b - a
_LOCATION_RTOL = 1e-9


@dataclass(frozen=True)
class TransformSpec:
    """Finite Hankel transform int_a^b f(x) J_nu(omega g(x)) dx"""
    f: ExprFunction
    g: ExprFunction
    a: float
    b: float
    nu: float
    omega: float

    def __post_init__(self):
        for name in ('a', 'b', 'nu', 'omega'):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"TransformSpec.{name} must be finite")
        if not self.a < self.b:
            raise DomainError(f"Interval requires a < b, got [{self.a}, {self.b}]")
        if self.omega <= 0:
            raise DomainError(f"Frequency must be positive, got {self.omega}")

    def with_f(self, f: ExprFunction) -> 'TransformSpec':
        return replace(self, f=f)

    def __str__(self) -> str:
        return (f"f={self.f.source}, g={self.g.source}, [{self.a:g}, {self.b:g}], "
                f"nu={self.nu:g}, omega={self.omega:g}")


class Basis(Enum):
    E = 'E'
    E_HAT = 'E_hat'


class Position(Enum):
    LEFT_ENDPOINT = 'left_endpoint'
    INTERIOR = 'interior'


@dataclass(frozen=True)
class FilonPlan:
    """Interpolation nodes x_0 = a < ... < x_d = b with multiplicities"""
    nodes: Tuple[float, ...]
    multiplicities: Tuple[int, ...]
    basis: Basis = Basis.E

    def __post_init__(self):
        object.__setattr__(self, 'nodes', tuple(float(x) for x in self.nodes))
        object.__setattr__(self, 'multiplicities', tuple(int(m) for m in self.multiplicities))
        if len(self.nodes) < 1 or len(self.nodes) != len(self.multiplicities):
            raise PlanError(
                f"{len(self.nodes)} nodes but {len(self.multiplicities)} multiplicities"
            )
        if any(m < 1 for m in self.multiplicities):
            raise PlanError(f"Multiplicities must be >= 1, got {self.multiplicities}")
        if any(x1 <= x0 for x0, x1 in zip(self.nodes, self.nodes[1:])):
            raise PlanError(f"Nodes must be strictly increasing, got {self.nodes}")

    @property
    def n(self) -> int:
        return sum(self.multiplicities)

    def __str__(self) -> str:
        nodes = ','.join(f"{x:.6g}" for x in self.nodes)
        mults = ','.join(str(m) for m in self.multiplicities)
        return f"filon[{self.basis.value}]({nodes}; {mults})"


# ===== helpers =====

def _scalar(value) -> Scalar:
    if isinstance(value, complex) or np.iscomplexobj(value):
        value = complex(value)
        tol = get_settings().phase_tol
        if abs(value.imag) <= tol * abs(value):
            return value.real
        logger.debug(f"complex result {value}")
        return value
    return float(value)


def _is_zero_function(spec: TransformSpec) -> bool:
    return not spec.f.depends_on_x() and float(spec.f.evaluate(0.0)) == 0.0


def _same_location(x: float, y: float, spec: TransformSpec) -> bool:
    return abs(x - y) <= _LOCATION_RTOL * (spec.b - spec.a)


def _critical_points(spec: TransformSpec) -> List[CriticalPoint]:
    return find_critical_points(spec.g, spec.a, spec.b)


def _boundary_block(reduced: float, g: ExprFunction, x: float, order: float,
                    omega: float) -> Scalar:
    """reduced / g'(x) * J_order(omega g(x))"""
    return reduced / float(g.derivative(x)) * kernel_value(order, omega * float(g.evaluate(x)))


# ===== asymptotic methods =====

def asymptotic_plain(spec: TransformSpec, m: int) -> Scalar:
    """
    Q_m^A = -sum_{k=1}^m (-omega)^{-k} [sigma_{k-1}(x)/g'(x) J_{nu+k}(omega g(x))]_a^b

    Raises:
        WrongMethodError: g has a zero or stationary point on [a, b]
    """
    if m < 1:
        raise DomainError(f"Truncation order must be >= 1, got {m}")
    points = _critical_points(spec)
    if points:
        raise WrongMethodError(
            f"Plain asymptotic method needs no critical points; found {points[0]}"
        )
    if _is_zero_function(spec):
        return 0.0

    seq = plain_sequence(spec.f, spec.g, spec.nu, m - 1, (spec.a, spec.b))
    total: Scalar = 0.0
    for k in range(1, m + 1):
        order = spec.nu + k
        upper = _boundary_block(seq.value(k - 1, spec.b), spec.g, spec.b, order, spec.omega)
        lower = _boundary_block(seq.value(k - 1, spec.a), spec.g, spec.a, order, spec.omega)
        total -= (-spec.omega) ** (-k) * (upper - lower)
    logger.debug(f"asymptotic_plain m={m}: {total}")
    return _scalar(total)


def asymptotic_remainder(spec: TransformSpec, m: int,
                         tol: Optional[float] = None) -> OracleResult:
    """
    (-omega)^{-m} H_{nu+m}[sigma_m[f]] by the reference integrator.

    Q_m^A plus this remainder equals H_nu[f] exactly.
    """
    def sigma_m(x: np.ndarray) -> np.ndarray:
        return sigma_plain(spec.f, spec.g, spec.nu, m, x)[m]

    result = hankel_integral(sigma_m, spec.g, spec.a, spec.b, spec.nu + m, spec.omega, tol)
    scale = (-spec.omega) ** (-m)
    return OracleResult(value=scale * result.value,
                        est_abs_error=abs(scale) * result.est_abs_error,
                        panels_used=result.panels_used, levels=result.levels)


def _require_zero(spec: TransformSpec, xi: float) -> None:
    points = _critical_points(spec)
    if (len(points) != 1 or points[0].kind is not CriticalKind.ZERO
            or not _same_location(points[0].location, xi, spec)):
        raise WrongMethodError(
            f"Zero-case method needs a single zero at x={xi}; classification found "
            f"{[str(p) for p in points]}"
        )


def asymptotic_zero(spec: TransformSpec, xi: float, m: int) -> Scalar:
    """
    Q_m^A = sum_{k=0}^{m-1} sigma~_k(xi) (-omega)^{-k} M(nu+k, omega)
            - sum_{k=1}^m (-omega)^{-k} [(sigma~_{k-1}(x) - sigma~_{k-1}(xi))/g'(x)
                                          J_{nu+k}(omega g(x))]_a^b

    Raises:
        WrongMethodError: the oscillator does not have exactly one zero at xi
        DomainError: nu <= -1
    """
    if m < 1:
        raise DomainError(f"Truncation order must be >= 1, got {m}")
    if spec.nu <= -1.0:
        raise DomainError(f"Zero case requires nu > -1, got {spec.nu}")
    _require_zero(spec, xi)
    if _is_zero_function(spec):
        return 0.0

    ends = [x for x in (spec.a, spec.b) if x != xi]
    seq = sigma_tilde(spec.f, spec.g, spec.nu, xi, m - 1, ends)
    total: Scalar = 0.0
    for k in range(m):
        coefficient = seq.at_critical(k)
        if coefficient != 0.0:
            moment = zero_case_moment(spec.g, spec.a, spec.b, spec.nu + k, spec.omega)
            total += coefficient * (-spec.omega) ** (-k) * moment
    for k in range(1, m + 1):
        order = spec.nu + k
        block: Scalar = 0.0
        if spec.b in ends:
            block += _boundary_block(seq.reduced_value(k - 1, spec.b), spec.g, spec.b,
                                     order, spec.omega)
        if spec.a in ends:
            block -= _boundary_block(seq.reduced_value(k - 1, spec.a), spec.g, spec.a,
                                     order, spec.omega)
        total -= (-spec.omega) ** (-k) * block
    logger.debug(f"asymptotic_zero m={m} xi={xi}: {total}")
    return _scalar(total)


def _require_stationary(spec: TransformSpec, zeta: float, r: int) -> CriticalPoint:
    points = _critical_points(spec)
    matches = [p for p in points if _same_location(p.location, zeta, spec)]
    if not matches or matches[0].kind is not CriticalKind.STATIONARY:
        raise WrongMethodError(
            f"No stationary point at x={zeta}; classification found {[str(p) for p in points]}"
        )
    point = matches[0]
    if point.stationary_type is StationaryType.I:
        raise UnsupportedCaseError(f"Type-I stationary point at x={zeta} (g != 0) is not supported")
    if point.order_r != r:
        raise WrongMethodError(f"Stationary point at x={zeta} has order {point.order_r}, not {r}")
    if len(points) > 1:
        raise WrongMethodError(
            f"Stationary method needs a single critical point; found {[str(p) for p in points]}"
        )
    return point


def _check_stationary_order(nu: float, r: int) -> None:
    bound = -1.0 / (r + 1)
    if nu < bound - 1e-12:
        raise DomainError(f"Stationary case requires nu > {bound:.6g}, got {nu}")
    if nu <= bound + 1e-12:
        logger.warning(f"nu={nu} sits on the existence boundary -1/(r+1) for r={r}")


def asymptotic_stationary(spec: TransformSpec, zeta: float, r: int, m: int,
                          position: Position = Position.LEFT_ENDPOINT) -> Scalar:
    """
    Stationary-point truncation.

        Q_m^A = sum_{k=0}^{m-1} (-omega)^{-k} sum_{j=0}^{r} sigma^_k^{(j)}(zeta)/j! M_j(zeta, nu+k, omega)
                - sum_{k=1}^m (-omega)^{-k} [(sigma^_{k-1} - T_r[sigma^_{k-1}])(x)/g'(x)
                                              J_{nu+k}(omega g(x))]_{x=a (interior only)}^{b}

    Generalized moments whose coefficient vanishes exactly are skipped.

    Raises:
        UnsupportedCaseError: type-I point, or a stationary right endpoint
        WrongMethodError: no stationary point of order r at zeta
    """
    if m < 1:
        raise DomainError(f"Truncation order must be >= 1, got {m}")
    if position is Position.LEFT_ENDPOINT and zeta != spec.a:
        if zeta == spec.b:
            raise UnsupportedCaseError("Stationary right endpoint: mirror x -> a+b-x first")
        raise WrongMethodError(f"x={zeta} is not the left endpoint {spec.a}")
    if position is Position.INTERIOR and not spec.a < zeta < spec.b:
        raise WrongMethodError(f"x={zeta} is not interior to [{spec.a}, {spec.b}]")
    _check_stationary_order(spec.nu, r)
    _require_stationary(spec, zeta, r)
    if _is_zero_function(spec):
        return 0.0

    ends = [spec.b] if position is Position.LEFT_ENDPOINT else [spec.a, spec.b]
    seq = sigma_hat(spec.f, spec.g, spec.nu, zeta, r, m - 1, r, ends)
    total: Scalar = 0.0
    for k in range(m):
        taylor = seq.jets_at_critical[k].coeffs
        for j in range(r + 1):
            if taylor[j] == 0.0:
                continue
            moment = generalized_moment(spec.g, zeta, spec.a, spec.b, spec.nu + k,
                                        spec.omega, r, j)
            total += (-spec.omega) ** (-k) * float(taylor[j]) * moment
    for k in range(1, m + 1):
        order = spec.nu + k
        block = _boundary_block(seq.reduced_value(k - 1, spec.b), spec.g, spec.b,
                                order, spec.omega)
        if position is Position.INTERIOR:
            block -= _boundary_block(seq.reduced_value(k - 1, spec.a), spec.g, spec.a,
                                     order, spec.omega)
        total -= (-spec.omega) ** (-k) * block
    logger.debug(f"asymptotic_stationary m={m} r={r} ({position.value}): {total}")
    return _scalar(total)


# ===== Filon methods =====

@dataclass(frozen=True, eq=False)
class FilonInterpolant:
    """
    p(x) = Lambda(x) sum_k coeffs[k] ((y(x) - center)/half_width)^k

    E:  Lambda = g', y = g
    E^: Lambda = s (r+1) y', y = (s g)^{1/(r+1)}
    """
    coeffs: np.ndarray
    center: float
    half_width: float
    basis: Basis
    sign: float = 1.0
    order_r: int = 0
    condition: float = 1.0

    def raw_coeffs(self) -> np.ndarray:
        """Coefficients d_k of p = Lambda sum_k d_k y^k."""
        shift = Polynomial([-self.center / self.half_width, 1.0 / self.half_width])
        raw = Polynomial(self.coeffs)(shift).coef
        out = np.zeros(len(self.coeffs))
        out[:min(len(raw), len(out))] = raw[:len(out)]
        return out

    def evaluate(self, g: ExprFunction, x) -> np.ndarray:
        """p(x) away from the stationary point (E^ weight is singular there)."""
        x = np.asarray(x, dtype=float)
        if self.basis is Basis.E:
            y = g.evaluate(x)
            lam = g.derivative(x)
        else:
            sg = self.sign * np.asarray(g.evaluate(x))
            y = sg ** (1.0 / (self.order_r + 1))
            lam = g.derivative(x) * sg ** (-self.order_r / (self.order_r + 1.0))
        scaled = (y - self.center) / self.half_width
        return lam * np.polynomial.polynomial.polyval(scaled, self.coeffs)


def _y_jets(g: ExprFunction, x: float, n: int, basis: Basis, sign: float, r: int,
            stationary_at: Optional[float]) -> Tuple[Jet, Jet]:
    """(Lambda, y) jets of length n at x."""
    if basis is Basis.E:
        full = g.jet(x, n + 1)
        return full.derivative(), full.truncate(n)
    if x == stationary_at:
        g_jet = g.jet(x, n + r + 2) * sign
        reduced = jet_power(jet_shift_div_power(g_jet, r + 1), 1.0 / (r + 1))
        y_full = jet_shift_up(reduced, 1)
    else:
        y_full = jet_power(g.jet(x, n + 1) * sign, 1.0 / (r + 1))
    return y_full.derivative() * (sign * (r + 1)), y_full.truncate(n)


def _basis_rows(lam: Jet, y: Jet, n: int, center: float, half_width: float) -> np.ndarray:
    """rows[i, k] = Taylor coefficient i of Lambda ((y - center)/h)^k"""
    m = len(y)
    scaled = (y - center) / half_width
    power = Jet.constant(1.0, y.center, m)
    rows = np.zeros((m, n))
    for k in range(n):
        rows[:, k] = jet_mul(lam, power).coeffs[:m]
        power = jet_mul(power, scaled)
    return rows


def _stationary_setup(spec: TransformSpec) -> Tuple[int, float]:
    """Order r and sign s for a type-II stationary point at a."""
    points = _critical_points(spec)
    stationary = [p for p in points if p.kind is CriticalKind.STATIONARY]
    if not stationary:
        raise WrongMethodError("E_hat basis needs a stationary point; none found")
    point = stationary[0]
    if len(points) > 1:
        raise WrongMethodError(f"Found {[str(p) for p in points]}; subdivide first")
    if point.stationary_type is StationaryType.I:
        raise UnsupportedCaseError(f"Type-I stationary point at x={point.location}")
    if _same_location(point.location, spec.b, spec):
        raise UnsupportedCaseError("Stationary right endpoint: mirror x -> a+b-x first")
    if not _same_location(point.location, spec.a, spec):
        raise UnsupportedCaseError("Filon rules for an interior stationary point are not supported")
    return point.order_r, stationary_sign(spec.g, spec.a, point.order_r)


def _check_plan(spec: TransformSpec, plan: FilonPlan) -> FilonPlan:
    nodes = list(plan.nodes)
    if not (_same_location(nodes[0], spec.a, spec) and _same_location(nodes[-1], spec.b, spec)):
        raise PlanError(f"Plan nodes must start at a={spec.a} and end at b={spec.b}, got {nodes}")
    nodes[0], nodes[-1] = spec.a, spec.b
    if len(nodes) == 1:
        raise PlanError("Plan needs at least the two endpoints")

    points = _critical_points(spec)
    if plan.basis is Basis.E:
        stationary = [p for p in points if p.kind is CriticalKind.STATIONARY]
        if stationary:
            raise WrongMethodError(f"E basis with a stationary point ({stationary[0]}); use E_hat")
        for p in points:
            hits = [i for i, x in enumerate(nodes) if _same_location(x, p.location, spec)]
            if not hits:
                raise PlanError(f"Zero of g at x={p.location:.15g} must be a plan node")
            nodes[hits[0]] = p.location
    return FilonPlan(tuple(nodes), plan.multiplicities, plan.basis)


def filon_coeffs(spec: TransformSpec, plan: FilonPlan) -> FilonInterpolant:
    """
    Hermite interpolant of f in the plan's basis.

    Conditions p^{(i)}(x_k) = f^{(i)}(x_k), i < m_k, are imposed on Taylor
    coefficients; y is mapped affinely onto [-1, 1] before solving.

    Raises:
        ConditioningError: condition number above the configured limit
        PlanError, WrongMethodError, UnsupportedCaseError: plan/case mismatch
    """
    plan = _check_plan(spec, plan)
    sign, r, stationary_at = 1.0, 0, None
    if plan.basis is Basis.E_HAT:
        r, sign = _stationary_setup(spec)
        stationary_at = spec.a
        y_a = 0.0
        y_b = float((sign * float(spec.g.evaluate(spec.b))) ** (1.0 / (r + 1)))
    else:
        y_a = float(spec.g.evaluate(spec.a))
        y_b = float(spec.g.evaluate(spec.b))
    center = 0.5 * (y_a + y_b)
    half_width = 0.5 * (y_b - y_a)

    n = plan.n
    blocks = []
    rhs = []
    for x, mult in zip(plan.nodes, plan.multiplicities):
        lam, y = _y_jets(spec.g, x, mult, plan.basis, sign, r, stationary_at)
        blocks.append(_basis_rows(lam, y, n, center, half_width))
        rhs.append(spec.f.jet(x, mult).coeffs)
    matrix = np.vstack(blocks)
    vector = np.concatenate(rhs)

    scale = np.max(np.abs(matrix), axis=1)
    scale[scale == 0] = 1.0
    matrix = matrix / scale[:, None]
    vector = vector / scale

    condition = float(np.linalg.cond(matrix))
    limit = get_settings().max_condition
    if not math.isfinite(condition) or condition > limit:
        raise ConditioningError(
            f"Filon system for {plan} has condition {condition:.3e} > {limit:.0e}",
            condition=condition,
        )
    coeffs = np.linalg.solve(matrix, vector)
    logger.debug(f"filon_coeffs {plan}: cond {condition:.3e}")
    return FilonInterpolant(coeffs, center, half_width, plan.basis, sign, r, condition)


def filon(spec: TransformSpec, plan: FilonPlan) -> Scalar:
    """
    Q^F = sum_k d_k mu_k, with d the interpolant coefficients in powers of y
    and mu the matching modified moments.
    """
    interpolant = filon_coeffs(spec, plan)
    raw = interpolant.raw_coeffs()
    if plan.basis is Basis.E_HAT:
        _check_stationary_order(spec.nu, interpolant.order_r)
        table = modified_moments_stationary(spec.g, spec.a, spec.b, spec.nu, spec.omega,
                                            interpolant.order_r, len(raw))
    else:
        table = modified_moments(spec.g, spec.a, spec.b, spec.nu, spec.omega, len(raw))
    value = np.sum(raw * table.values)
    logger.debug(f"filon {plan}: {value}")
    return _scalar(value)


# ===== rates =====

def expected_rate(method: str, m: int, r: int = 0, sigma_vanishes: bool = False) -> float:
    """
    Theoretical decay exponent p of |error| ~ omega^{-p}.

    Args:
        method: 'plain', 'zero' or 'stationary'
        m: truncation order, or the effective endpoint multiplicity of a Filon plan
        r: stationary order
        sigma_vanishes: zero case with sigma~_m(xi) = 0
    """
    if method == 'plain':
        return m + 1.5
    if method == 'zero':
        return m + 1.5 if sigma_vanishes else m + 1.0
    if method == 'stationary':
        return m + 1.0 / (r + 1)
    raise ValueError(f"Unknown method family '{method}'")


def filon_order(plan: FilonPlan, r: int = 0) -> int:
    """Effective m of a plan: min(m_d, floor(m_0/(r+1)))."""
    return min(plan.multiplicities[-1], plan.multiplicities[0] // (r + 1))


def zero_sigma_vanishes(spec: TransformSpec, xi: float, m: int) -> bool:
    """True when sigma~_m[f](xi) is numerically zero."""
    seq = sigma_tilde(spec.f, spec.g, spec.nu, xi, m)
    scale = max(abs(seq.at_critical(k)) for k in range(m + 1))
    return abs(seq.at_critical(m)) <= 1e-10 * max(scale, 1e-300)
