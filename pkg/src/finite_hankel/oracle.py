"""
Reference Integrator Module

Oscillation-resolving panel quadrature used as ground truth for every method
and as the fallback source of moments.

Panels are sized from the cumulative local phase so that each spans at most
pi radians of the kernel argument, graded geometrically toward endpoints and
critical points, and integrated with a fixed Gauss-Legendre rule. The panel
set is halved globally until two successive levels agree.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .exceptions import ClassificationError, OracleCostError, ToleranceError
from .expr import ExprFunction, find_critical_points
from .settings import get_settings
from .specfun import bessel_j

if TYPE_CHECKING:
    from .methods import TransformSpec

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]

# cap on quadrature nodes evaluated per call
_CHUNK_PANELS = 1 << 15

# baseline panel count when the integrand does not oscillate
_BASE_PANELS = 4

_MIN_TOL = 1e-13


@dataclass(frozen=True)
class OracleResult:
    """Reference value with refinement error estimate"""
    value: Scalar
    est_abs_error: float
    panels_used: int
    levels: int = 1

    def __str__(self) -> str:
        return (f"{self.value:.17g} (+/- {self.est_abs_error:.3g}, "
                f"{self.panels_used} panels, {self.levels} levels)")


@lru_cache(maxsize=8)
def _gauss_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def hankel_kernel(nu: float, z: np.ndarray) -> np.ndarray:
    """
    J_nu(z) on the real line.

    Negative arguments use J_nu(-z) = e^{i nu pi} J_nu(z); the result is
    complex only when nu is not an integer and some z < 0.
    """
    z = np.asarray(z, dtype=float)
    if float(nu).is_integer() or not np.any(z < 0):
        return np.asarray(bessel_j(nu, z))
    magnitude = np.asarray(bessel_j(nu, np.abs(z)))
    phase = complex(math.cos(nu * math.pi), math.sin(nu * math.pi))
    return np.where(z < 0, phase * magnitude, magnitude + 0j)


def kernel_value(nu: float, z: float) -> Scalar:
    """Scalar hankel_kernel."""
    value = hankel_kernel(nu, np.array([z]))[0]
    return complex(value) if np.iscomplexobj(value) else float(value)


def _graded_edges(point: float, a: float, b: float) -> np.ndarray:
    settings = get_settings()
    length = b - a
    depth = int(math.ceil(math.log(settings.grading_depth) / math.log(settings.grading_ratio)))
    offsets = length * settings.grading_ratio ** np.arange(1, depth + 1)
    edges = np.concatenate([[point], point + offsets, point - offsets])
    return edges[(edges >= a) & (edges <= b)]


def _phase_edges(a: float, b: float, phase_rate: Optional[Callable]) -> np.ndarray:
    settings = get_settings()
    xs = np.linspace(a, b, settings.phase_samples)
    rate = np.full_like(xs, _BASE_PANELS * math.pi / (b - a))
    if phase_rate is not None:
        rate = rate + np.abs(np.asarray(phase_rate(xs), dtype=float))
    phase = cumulative_trapezoid(rate, xs, initial=0.0)
    total = float(phase[-1])
    if total > settings.cost_guard:
        raise OracleCostError(
            f"Integrand phase {total:.3e} exceeds the cost guard {settings.cost_guard:.1e}"
        )
    count = int(math.ceil(total / math.pi))
    targets = np.linspace(0.0, total, count + 1)
    edges = np.interp(targets, phase, xs)
    edges[0], edges[-1] = a, b
    return edges


def _panel_sums(func: Callable, edges: np.ndarray, nodes: np.ndarray,
                weights: np.ndarray) -> Tuple[Scalar, float]:
    """Integral and L1 norm over consecutive panels."""
    total = 0.0
    l1 = 0.0
    for start in range(0, len(edges) - 1, _CHUNK_PANELS):
        left = edges[start:start + _CHUNK_PANELS]
        right = edges[start + 1:start + _CHUNK_PANELS + 1]
        left = left[:len(right)]
        half = 0.5 * (right - left)
        mid = 0.5 * (right + left)
        x = mid[:, None] + half[:, None] * nodes[None, :]
        values = np.asarray(func(x.ravel())).reshape(x.shape)
        scaled = values * weights[None, :] * half[:, None]
        total = total + np.sum(scaled)
        l1 += float(np.sum(np.abs(scaled)))
    return total, l1


def _refine(edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out


def integrate_oscillatory(func: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                          phase_rate: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                          tol: Optional[float] = None,
                          points: Sequence[float] = ()) -> OracleResult:
    """
    Integral of a vectorized integrand over [a, b].

    Args:
        func: integrand, maps an array of x to real or complex values
        a, b: interval
        phase_rate: local oscillation rate in radians per unit x (e.g. omega*|g'|)
        tol: relative agreement between successive refinement levels
        points: locations to grade the mesh toward (integrable singularities,
            critical points); endpoints included when listed

    Returns:
        OracleResult

    Raises:
        OracleCostError: total phase exceeds the cost guard
        ToleranceError: tol below the precision floor, or no convergence
    """
    settings = get_settings()
    tol = settings.oracle_tol if tol is None else tol
    if tol < _MIN_TOL:
        raise ToleranceError(f"Oracle tolerance {tol:.1e} below the floor {_MIN_TOL:.0e}")
    if a == b:
        return OracleResult(value=0.0, est_abs_error=0.0, panels_used=1)
    if a > b:
        flipped = integrate_oscillatory(func, b, a, phase_rate, tol, points)
        return OracleResult(-flipped.value, flipped.est_abs_error,
                            flipped.panels_used, flipped.levels)

    edges = _phase_edges(a, b, phase_rate)
    graded = [_graded_edges(p, a, b) for p in points if a <= p <= b]
    if graded:
        edges = np.unique(np.concatenate([edges] + graded))

    nodes, weights = _gauss_rule(settings.rule_points)
    previous, l1 = _panel_sums(func, edges, nodes, weights)
    floor = 64.0 * np.finfo(float).eps
    for level in range(1, settings.max_levels + 1):
        edges = _refine(edges)
        current, l1 = _panel_sums(func, edges, nodes, weights)
        diff = float(abs(current - previous))
        logger.debug(f"oracle level {level}: {len(edges) - 1} panels, diff {diff:.3e}")
        if diff <= max(tol * abs(current), floor * l1):
            return OracleResult(value=_real_if_close(current), est_abs_error=diff,
                                panels_used=len(edges) - 1, levels=level + 1)
        previous = current
    raise ToleranceError(
        f"Oracle did not reach relative {tol:.1e} after {settings.max_levels} refinements "
        f"(last difference {diff:.3e})"
    )


def _real_if_close(value: Scalar) -> Scalar:
    if isinstance(value, complex) or np.iscomplexobj(value):
        value = complex(value)
        if value.imag == 0.0:
            return value.real
        return value
    return float(value)


def _critical_locations(g: ExprFunction, a: float, b: float) -> Tuple[float, ...]:
    try:
        return tuple(p.location for p in find_critical_points(g, a, b))
    except ClassificationError:
        return ()


def hankel_integral(func: Callable[[np.ndarray], np.ndarray], g: ExprFunction,
                    a: float, b: float, nu: float, omega: float,
                    tol: Optional[float] = None) -> OracleResult:
    """
    Integral of func(x) J_nu(omega g(x)) over [a, b] for an array-valued func.

    Raises:
        OracleCostError: omega * max|g| exceeds the cost guard
    """
    settings = get_settings()
    lo, hi = min(a, b), max(a, b)
    samples = np.linspace(lo, hi, settings.phase_samples)
    g_max = float(np.max(np.abs(g.evaluate(samples))))
    if omega * g_max > settings.cost_guard:
        raise OracleCostError(
            f"omega*max|g| = {omega * g_max:.3e} exceeds the cost guard {settings.cost_guard:.1e}"
        )

    def integrand(x: np.ndarray) -> np.ndarray:
        return func(x) * hankel_kernel(nu, omega * g.evaluate(x))

    def rate(x: np.ndarray) -> np.ndarray:
        return omega * np.abs(g.derivative(x))

    points = (lo, hi) + _critical_locations(g, lo, hi) if lo < hi else ()
    return integrate_oscillatory(integrand, a, b, rate, tol, points)


def reference_hankel(spec: 'TransformSpec', tol: Optional[float] = None) -> OracleResult:
    """
    Reference value of H_nu[f] = int_a^b f(x) J_nu(omega g(x)) dx.

    Args:
        spec: transform description
        tol: relative refinement tolerance (>= 1e-13)

    Returns:
        OracleResult
    """
    result = hankel_integral(spec.f.evaluate, spec.g, spec.a, spec.b,
                             spec.nu, spec.omega, tol)
    logger.debug(f"reference_hankel({spec}): {result}")
    return result
