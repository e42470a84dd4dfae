"""
Jet Arithmetic Module

Truncated Taylor series ("jets") at a point.

A jet of length n stores c_j = f^(j)(center)/j! for j = 0..n-1. The center
may be a scalar or a numpy array; in the latter case every coefficient is an
array of the same shape and all operations act elementwise, so one jet
computation evaluates many points at once.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .exceptions import JetError, NonRemovableSingularityError, SingularDivisionError
from .settings import get_settings

logger = logging.getLogger(__name__)

Number = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class Jet:
    """Taylor coefficients c_0..c_{n-1} of a function at `center`."""
    center: Number
    coeffs: np.ndarray

    # ndarray (op) Jet must dispatch to the Jet reflected operators
    __array_ufunc__ = None

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs)
        if coeffs.ndim == 0 or coeffs.shape[0] < 1:
            raise JetError("Jet length must be at least 1")
        object.__setattr__(self, 'coeffs', coeffs)

    # ----- constructors -----

    @classmethod
    def constant(cls, value: Number, center: Number, n: int) -> 'Jet':
        shape = np.shape(center)
        coeffs = np.zeros((n,) + shape, dtype=np.result_type(value, float))
        coeffs[0] = value
        return cls(center, coeffs)

    @classmethod
    def variable(cls, center: Number, n: int) -> 'Jet':
        """Jet of the identity x -> x."""
        jet = cls.constant(center, center, n)
        if n > 1:
            jet.coeffs[1] = 1.0
        return jet

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[float], center: Number = 0.0) -> 'Jet':
        return cls(center, np.asarray(coeffs, dtype=float))

    # ----- properties -----

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    @property
    def value(self) -> Number:
        return self.coeffs[0]

    def derivatives(self) -> np.ndarray:
        """f^(j)(center) for j = 0..n-1."""
        factorials = np.cumprod(np.concatenate(([1.0], np.arange(1, len(self)))))
        return self.coeffs * factorials.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))

    def derivative(self) -> 'Jet':
        """Formal derivative; length drops by one."""
        if len(self) < 2:
            raise JetError("Cannot differentiate a jet of length 1")
        scale = np.arange(1, len(self), dtype=float)
        scale = scale.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        return Jet(self.center, self.coeffs[1:] * scale)

    def truncate(self, n: int) -> 'Jet':
        if n < 1 or n > len(self):
            raise JetError(f"Cannot truncate jet of length {len(self)} to {n}")
        return Jet(self.center, self.coeffs[:n])

    def evaluate(self, offset: Number) -> Number:
        """Sum c_j * offset^j (Horner)."""
        result = self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            result = result * offset + c
        return result

    def __str__(self) -> str:
        return f"Jet(center={self.center}, coeffs={np.array2string(self.coeffs, precision=6)})"

    # ----- arithmetic -----

    def __add__(self, other):
        a, b = _align(self, _lift(other, self))
        return Jet(self.center, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = _align(self, _lift(other, self))
        return Jet(self.center, a - b)

    def __rsub__(self, other):
        a, b = _align(_lift(other, self), self)
        return Jet(self.center, a - b)

    def __neg__(self):
        return Jet(self.center, -self.coeffs)

    def __mul__(self, other):
        if np.isscalar(other) or isinstance(other, np.ndarray):
            return Jet(self.center, self.coeffs * other)
        return jet_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other) or isinstance(other, np.ndarray):
            return Jet(self.center, self.coeffs / other)
        return jet_div(self, other)

    def __rtruediv__(self, other):
        return jet_div(_lift(other, self), self)


def _lift(value, like: Jet) -> Jet:
    if isinstance(value, Jet):
        return value
    return Jet.constant(value, like.center, len(like))


def _check_centers(a: Jet, b: Jet) -> None:
    if a.center is b.center:
        return
    if np.shape(a.center) != np.shape(b.center) or not np.array_equal(a.center, b.center):
        raise JetError("Jets expanded at different centers cannot be combined")


def _align(a: Jet, b: Jet):
    """Zero-pad the shorter operand; returns coefficient arrays of equal length."""
    _check_centers(a, b)
    n = max(len(a), len(b))
    return _pad(a.coeffs, n), _pad(b.coeffs, n)


def _pad(coeffs: np.ndarray, n: int) -> np.ndarray:
    if coeffs.shape[0] == n:
        return coeffs
    pad = np.zeros((n - coeffs.shape[0],) + coeffs.shape[1:], dtype=coeffs.dtype)
    return np.concatenate([coeffs, pad])


def jet_mul(a: Jet, b: Jet) -> Jet:
    """
    Cauchy product truncated to the common length.

    Raises:
        JetError: jets expanded at different centers
    """
    ca, cb = _align(a, b)
    n = ca.shape[0]
    out = np.zeros(np.broadcast(ca, cb).shape, dtype=np.result_type(ca, cb, float))
    for j in range(n):
        out[j] = np.sum(ca[:j + 1] * cb[j::-1], axis=0)
    return Jet(a.center, out)


def jet_div(num: Jet, den: Jet) -> Jet:
    """
    Quotient by forward substitution of the lower-triangular Cauchy system.

    c_j = (a_j - sum_{i=1..j} b_i c_{j-i}) / b_0

    Raises:
        SingularDivisionError: b_0 == 0 (shift out the common zero first)
    """
    ca, cb = _align(num, den)
    if np.any(cb[0] == 0):
        raise SingularDivisionError(
            "Division by a jet with zero constant term; cancel the common zero first"
        )
    n = ca.shape[0]
    out = np.zeros(np.broadcast(ca, cb).shape, dtype=np.result_type(ca, cb, float))
    for j in range(n):
        acc = ca[j] - np.sum(cb[1:j + 1] * out[j - 1::-1][:j], axis=0) if j else ca[0]
        out[j] = acc / cb[0]
    return Jet(num.center, out)


def jet_shift_div_power(a: Jet, p: int) -> Jet:
    """
    Jet of a(x) / (x - center)^p, length n - p.

    The leading p coefficients must be numerically zero (relative to the
    largest coefficient).

    Raises:
        NonRemovableSingularityError: a leading coefficient is not negligible
        JetError: p out of range
    """
    if p == 0:
        return a
    if p < 0 or p >= len(a):
        raise JetError(f"Shift {p} invalid for jet of length {len(a)}")
    threshold = get_settings().jet_zero_threshold
    scale = np.max(np.abs(a.coeffs), axis=0)
    leading = np.abs(a.coeffs[:p])
    if np.any(leading > threshold * scale):
        raise NonRemovableSingularityError(
            f"Leading {p} coefficient(s) {np.max(leading):.3e} not negligible "
            f"against scale {np.max(scale):.3e}"
        )
    return Jet(a.center, a.coeffs[p:])


def jet_shift_up(a: Jet, p: int) -> Jet:
    """Jet of a(x) * (x - center)^p, keeping the length."""
    if p == 0:
        return a
    n = len(a)
    coeffs = np.zeros_like(a.coeffs)
    if p < n:
        coeffs[p:] = a.coeffs[:n - p]
    return Jet(a.center, coeffs)


def jet_power(u: Jet, p: float) -> Jet:
    """
    u^p for real p via w_k = 1/(k u_0) sum_{j=1..k} ((p+1) j - k) u_j w_{k-j}.

    Requires u_0 != 0; non-negative integer powers use repeated squaring and
    tolerate u_0 == 0.
    """
    if float(p).is_integer() and p >= 0:
        return _integer_power(u, int(p))
    c = u.coeffs
    if np.any(c[0] == 0):
        raise SingularDivisionError(f"Power {p} of a jet vanishing at its center")
    n = len(u)
    w = np.zeros_like(c, dtype=np.result_type(c, float))
    w[0] = c[0] ** p
    for k in range(1, n):
        j = np.arange(1, k + 1, dtype=float).reshape((-1,) + (1,) * (c.ndim - 1))
        w[k] = np.sum(((p + 1.0) * j - k) * c[1:k + 1] * w[k - 1::-1][:k], axis=0) / (k * c[0])
    return Jet(u.center, w)


def _integer_power(u: Jet, p: int) -> Jet:
    result = Jet.constant(1.0, u.center, len(u))
    base = u
    while p:
        if p & 1:
            result = jet_mul(result, base)
        p >>= 1
        if p:
            base = jet_mul(base, base)
    return result


def jet_exp(u: Jet) -> Jet:
    c = u.coeffs
    e = np.zeros_like(c, dtype=float)
    e[0] = np.exp(c[0])
    for k in range(1, len(u)):
        j = np.arange(1, k + 1, dtype=float).reshape((-1,) + (1,) * (c.ndim - 1))
        e[k] = np.sum(j * c[1:k + 1] * e[k - 1::-1][:k], axis=0) / k
    return Jet(u.center, e)


def jet_log(u: Jet) -> Jet:
    c = u.coeffs
    if np.any(c[0] <= 0):
        raise SingularDivisionError("Logarithm of a jet with non-positive value")
    out = np.zeros_like(c, dtype=float)
    out[0] = np.log(c[0])
    for k in range(1, len(u)):
        j = np.arange(1, k, dtype=float).reshape((-1,) + (1,) * (c.ndim - 1))
        acc = np.sum(j * out[1:k] * c[k - 1:0:-1], axis=0) if k > 1 else 0.0
        out[k] = (c[k] - acc / k) / c[0]
    return Jet(u.center, out)


def jet_sincos(u: Jet):
    """(sin u, cos u) by the coupled recurrences."""
    c = u.coeffs
    s = np.zeros_like(c, dtype=float)
    co = np.zeros_like(c, dtype=float)
    s[0] = np.sin(c[0])
    co[0] = np.cos(c[0])
    for k in range(1, len(u)):
        j = np.arange(1, k + 1, dtype=float).reshape((-1,) + (1,) * (c.ndim - 1))
        s[k] = np.sum(j * c[1:k + 1] * co[k - 1::-1][:k], axis=0) / k
        co[k] = -np.sum(j * c[1:k + 1] * s[k - 1::-1][:k], axis=0) / k
    return Jet(u.center, s), Jet(u.center, co)


def jet_compose(derivatives: Callable[[Number, int], np.ndarray], u: Jet) -> Jet:
    """
    Jet of F(u(x)) given a callable returning F^(k)(u_0) for k = 0..n-1.

    Evaluates sum_k F^(k)(u_0)/k! (u - u_0)^k in jet arithmetic.
    """
    n = len(u)
    d = np.asarray(derivatives(u.value, n), dtype=float)
    delta = Jet(u.center, np.concatenate([np.zeros_like(u.coeffs[:1]), u.coeffs[1:]]))
    factorial = 1.0
    taylor = []
    for k in range(n):
        if k:
            factorial *= k
        taylor.append(d[k] / factorial)
    result = Jet.constant(taylor[-1], u.center, n)
    for coeff in taylor[-2::-1]:
        result = jet_mul(result, delta) + coeff
    return result
