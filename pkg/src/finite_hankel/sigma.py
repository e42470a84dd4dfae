"""
Sigma Recursion Module

Integration-by-parts coefficients of the finite Hankel transform.

plain (no critical point):
    sigma_0 = f
    sigma_{k+1} = d/dx[sigma_k / g'] - (nu+k+1) sigma_k / g

tilde (zero of g at xi) and hat (type-II stationary point of order r at zeta)
subtract the degree-r Taylor polynomial T_r[sigma_k](x, zeta) before each
step (r = 0 for the zero case). At the critical point itself the quotients
have removable singularities; they are evaluated with jets centered there by
zeroing the first r+1 coefficients and cancelling common powers of (x-zeta).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import ClassificationError, JetError, NonRemovableSingularityError
from .expr import ExprFunction
from .jets import Jet, jet_div, jet_mul, jet_shift_div_power

logger = logging.getLogger(__name__)

Points = Union[float, Sequence[float], np.ndarray]


class SigmaVariant(Enum):
    PLAIN = 'plain'
    TILDE = 'tilde'
    HAT = 'hat'


@dataclass(frozen=True, eq=False)
class SigmaSequence:
    """
    sigma_k values at evaluation points, plus jets at the critical point.

    values[k, i]   sigma_k(points[i])
    reduced[k, i]  sigma_k(points[i]) - T_r[sigma_k](points[i], critical_point)
                   (equals values for the plain variant)
    jets_at_critical[k]  Taylor coefficients of sigma_k at the critical point
    """
    variant: SigmaVariant
    nu: float
    order_r: int
    critical_point: Optional[float]
    points: Tuple[float, ...]
    values: np.ndarray
    reduced: np.ndarray
    jets_at_critical: Tuple[Jet, ...] = ()

    @property
    def k_max(self) -> int:
        return self.values.shape[0] - 1

    def _index(self, x: float) -> int:
        try:
            return self.points.index(float(x))
        except ValueError:
            raise KeyError(f"sigma was not evaluated at x={x}") from None

    def value(self, k: int, x: float) -> float:
        if self.critical_point is not None and x == self.critical_point:
            return self.at_critical(k)
        return float(self.values[k, self._index(x)])

    def reduced_value(self, k: int, x: float) -> float:
        return float(self.reduced[k, self._index(x)])

    def at_critical(self, k: int) -> float:
        return float(self.jets_at_critical[k].coeffs[0])

    def derivative_at_critical(self, k: int, j: int) -> float:
        """sigma_k^{(j)}(critical_point)."""
        jet = self.jets_at_critical[k]
        if j >= len(jet):
            raise JetError(f"sigma_{k} jet holds derivatives up to order {len(jet) - 1}")
        return float(jet.derivatives()[j])


def hat_jet_length(k_max: int, r: int, j_max: int = 0) -> int:
    """
    Jet length at the critical point: each level consumes r+1 coefficients.

    g keeps at least r+2 coefficients so that g / (x - c)^{r+1} exists
    when k_max = 0.
    """
    return k_max * (r + 1) + max(j_max, r) + 2


def _oscillator_jets(g: ExprFunction, center, n: int) -> Tuple[Jet, Jet]:
    full = g.jet(center, n + 1)
    return full.truncate(n), full.derivative()


def _critical_jets(f: ExprFunction, g: ExprFunction, nu: float, center: float,
                   r: int, k_max: int, j_max: int) -> Tuple[Jet, ...]:
    """sigma_k jets at a zero (r = 0) or type-II stationary point (r >= 1)."""
    n = hat_jet_length(k_max, r, j_max)
    g_jet, dg_jet = _oscillator_jets(g, center, n)
    try:
        g_reduced = jet_shift_div_power(g_jet, r + 1)
        dg_reduced = jet_shift_div_power(dg_jet, r)
    except NonRemovableSingularityError as exc:
        raise ClassificationError(
            f"x={center} is not a critical point of order {r} of g: {exc}"
        ) from exc

    current = f.jet(center, n)
    jets = [current]
    for k in range(k_max):
        length = len(current)
        coeffs = np.array(current.coeffs, dtype=float)
        coeffs[:r + 1] = 0.0
        u = Jet(center, coeffs)
        quotient = jet_div(jet_shift_div_power(u, r), dg_reduced).truncate(length - r)
        dq = quotient.derivative()
        over_g = jet_div(jet_shift_div_power(u, r + 1), g_reduced).truncate(len(dq))
        current = dq - (nu + k + 1) * over_g
        jets.append(current)
    return tuple(jets)


def _taylor_polynomial(taylor: np.ndarray, center: float, x: np.ndarray, n: int) -> Jet:
    """Jet at x of sum_j taylor[j] (X - center)^j."""
    offset = Jet.variable(x, n) - center
    result = Jet.constant(float(taylor[-1]), x, n)
    for c in taylor[-2::-1]:
        result = jet_mul(result, offset) + float(c)
    return result


def _levels_at_points(f: ExprFunction, g: ExprFunction, nu: float, k_max: int,
                      x: np.ndarray, center: Optional[float] = None, r: int = 0,
                      critical: Sequence[Jet] = ()) -> Tuple[np.ndarray, np.ndarray]:
    n = k_max + 1
    g_jet, dg_jet = _oscillator_jets(g, x, n)
    if np.any(g_jet.coeffs[0] == 0) or np.any(dg_jet.coeffs[0] == 0):
        raise ClassificationError(
            "g or g' vanishes at an evaluation point; use the zero or stationary variant"
        )

    values = np.zeros((k_max + 1,) + x.shape)
    reduced = np.zeros_like(values)
    current = f.jet(x, n)
    for k in range(k_max + 1):
        values[k] = current.coeffs[0]
        u = current
        if critical:
            u = current - _taylor_polynomial(critical[k].coeffs[:r + 1], center, x, len(current))
        reduced[k] = u.coeffs[0]
        if k == k_max:
            break
        dq = jet_div(u, dg_jet).truncate(len(u)).derivative()
        over_g = jet_div(u, g_jet).truncate(len(dq))
        current = dq - (nu + k + 1) * over_g
    return values, reduced


def _as_points(x: Points) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float))


def sigma_plain(f: ExprFunction, g: ExprFunction, nu: float, k_max: int,
                x: Points) -> np.ndarray:
    """
    sigma_k[f](x) for k = 0..k_max.

    Args:
        x: scalar or array of points where g and g' do not vanish

    Returns:
        array of shape (k_max+1,) + shape(x)

    Raises:
        ClassificationError: g or g' vanishes at x
    """
    points = np.asarray(x, dtype=float)
    values, _ = _levels_at_points(f, g, nu, k_max, points)
    return values


def plain_sequence(f: ExprFunction, g: ExprFunction, nu: float, k_max: int,
                   points: Sequence[float]) -> SigmaSequence:
    x = _as_points(points)
    values, reduced = _levels_at_points(f, g, nu, k_max, x)
    return SigmaSequence(SigmaVariant.PLAIN, nu, 0, None, tuple(x.tolist()), values, reduced)


def sigma_tilde(f: ExprFunction, g: ExprFunction, nu: float, xi: float, k_max: int,
                points: Points = ()) -> SigmaSequence:
    """
    Zero-case sequence: sigma~_k(xi) from jets, sigma~_k at the other points.

    Raises:
        ClassificationError: g(xi) != 0, or g/g' vanish at an evaluation point
    """
    critical = _critical_jets(f, g, nu, xi, 0, k_max, 0)
    x = _as_points(points) if np.size(points) else np.zeros(0)
    if x.size:
        values, reduced = _levels_at_points(f, g, nu, k_max, x, xi, 0, critical)
    else:
        values = reduced = np.zeros((k_max + 1, 0))
    logger.debug(f"sigma_tilde at xi={xi}: {[float(j.coeffs[0]) for j in critical]}")
    return SigmaSequence(SigmaVariant.TILDE, nu, 0, xi, tuple(x.tolist()),
                         values, reduced, critical)


def sigma_hat(f: ExprFunction, g: ExprFunction, nu: float, zeta: float, r: int,
              k_max: int, j_max: int = 0, points: Points = ()) -> SigmaSequence:
    """
    Stationary-case sequence around a type-II stationary point of order r.

    derivative_at_critical(k, j) gives sigma^_k^{(j)}(zeta) for j <= max(j_max, r).

    Raises:
        ClassificationError: zeta is not a type-II stationary point of order r
    """
    if r < 1:
        raise ClassificationError(f"Stationary order must be at least 1, got {r}")
    critical = _critical_jets(f, g, nu, zeta, r, k_max, j_max)
    x = _as_points(points) if np.size(points) else np.zeros(0)
    if x.size:
        values, reduced = _levels_at_points(f, g, nu, k_max, x, zeta, r, critical)
    else:
        values = reduced = np.zeros((k_max + 1, 0))
    return SigmaSequence(SigmaVariant.HAT, nu, r, zeta, tuple(x.tolist()),
                         values, reduced, critical)
