"""
Expression Module

f(x), g(x) 입력용 수식 언어와 진동자 임계점 분류
- Lark LALR 문법 -> AST (불변 데이터클래스)
- 값 평가 (numpy 배열) 및 Jet 평가
- classify_oscillator: g 의 영점/정류점 탐색과 분류

문법 (우선순위: ^ > 단항 - > * / > + -, 같은 우선순위는 왼쪽 결합):
    함수: sin cos exp log sqrt besselj(order, arg)
    상수: pi e
    변수: x
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError
from scipy import optimize, special

from .exceptions import (
    ClassificationError, DomainError, ExprError, ExprEvaluationError,
    ExprSyntaxError, JetError, SubdivideRequiredError,
)
from .jets import (
    Jet, jet_compose, jet_div, jet_exp, jet_log, jet_mul, jet_power, jet_sincos,
)
from .settings import get_settings

logger = logging.getLogger(__name__)

Number = Union[float, np.ndarray]

VARIABLE = 'x'

CONSTANTS = {
    'pi': math.pi,
    'e': math.e,
}

# 함수 이름 -> 인자 개수
FUNCTIONS = {
    'sin': 1,
    'cos': 1,
    'exp': 1,
    'log': 1,
    'sqrt': 1,
    'besselj': 2,
}

# 정류점 차수 판정에 쓰는 jet 길이
_ORDER_SCAN = 12

GRAMMAR = r"""
    ?sum: product
        | sum "+" product       -> add
        | sum "-" product       -> sub

    ?product: signed
        | product "*" signed    -> mul
        | product "/" signed    -> div

    ?signed: power
        | "-" signed            -> neg
        | "+" signed

    ?power: atom
        | power "^" exponent    -> pow

    ?exponent: atom
        | "-" exponent          -> neg
        | "+" exponent

    ?atom: NUMBER               -> number
         | NAME                 -> var
         | NAME "(" sum ("," sum)* ")" -> call
         | "(" sum ")"

    NAME: /[A-Za-z_][A-Za-z0-9_]*/
    %import common.NUMBER
    %import common.WS_INLINE
    %ignore WS_INLINE
"""


# ===== AST =====

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: 'Node'


@dataclass(frozen=True)
class BinOp:
    op: str
    left: 'Node'
    right: 'Node'


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple['Node', ...]


Node = Union[Num, Var, Neg, BinOp, Call]


@v_args(inline=True)
class _AstBuilder(Transformer):
    """Lark 트리 -> AST, 식별자 검사 포함"""

    def number(self, token):
        return Num(float(token))

    def var(self, token):
        name = str(token)
        if name in CONSTANTS:
            return Num(CONSTANTS[name])
        if name != VARIABLE:
            raise ExprSyntaxError(f"Unknown identifier '{name}'", position=token.column)
        return Var(name)

    def call(self, token, *args):
        name = str(token)
        if name not in FUNCTIONS:
            raise ExprSyntaxError(f"Unknown function '{name}'", position=token.column)
        if len(args) != FUNCTIONS[name]:
            raise ExprSyntaxError(
                f"Function '{name}' takes {FUNCTIONS[name]} argument(s), got {len(args)}",
                position=token.column,
            )
        return Call(name, tuple(args))

    def neg(self, operand):
        return Neg(operand)

    def add(self, left, right):
        return BinOp('+', left, right)

    def sub(self, left, right):
        return BinOp('-', left, right)

    def mul(self, left, right):
        return BinOp('*', left, right)

    def div(self, left, right):
        return BinOp('/', left, right)

    def pow(self, left, right):
        return BinOp('^', left, right)


_PARSER = Lark(GRAMMAR, start='sum', parser='lalr')


def to_source(node: Node) -> str:
    """AST -> 완전 괄호 표기 문자열 (parse 로 되돌릴 수 있음)"""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)}{node.op}{to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_source(arg) for arg in node.args)})"
    raise ExprError(f"Unknown AST node {node!r}")


def depends_on_x(node: Node) -> bool:
    """변수 x 포함 여부"""
    if isinstance(node, Var):
        return True
    if isinstance(node, Num):
        return False
    if isinstance(node, Neg):
        return depends_on_x(node.operand)
    if isinstance(node, BinOp):
        return depends_on_x(node.left) or depends_on_x(node.right)
    return any(depends_on_x(arg) for arg in node.args)


def _substitute(node: Node, inner: Node) -> Node:
    if isinstance(node, Var):
        return inner
    if isinstance(node, Num):
        return node
    if isinstance(node, Neg):
        return Neg(_substitute(node.operand, inner))
    if isinstance(node, BinOp):
        return BinOp(node.op, _substitute(node.left, inner), _substitute(node.right, inner))
    return Call(node.name, tuple(_substitute(arg, inner) for arg in node.args))


# ===== value evaluation =====

def _evaluate(node: Node, x: Number) -> Number:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_evaluate(node.operand, x)
    if isinstance(node, BinOp):
        left = _evaluate(node.left, x)
        right = _evaluate(node.right, x)
        if node.op == '+':
            return left + right
        if node.op == '-':
            return left - right
        if node.op == '*':
            return left * right
        if node.op == '/':
            return np.divide(left, right)
        return np.power(np.asarray(left, dtype=float), right)
    args = [_evaluate(arg, x) for arg in node.args]
    if node.name == 'besselj':
        return special.jv(args[0], args[1])
    return getattr(np, node.name)(args[0])


# ===== jet evaluation =====

def _constant_value(node: Node) -> float:
    value = float(np.asarray(_evaluate(node, 0.0)))
    if not math.isfinite(value):
        raise ExprEvaluationError(f"Constant subexpression {to_source(node)} is not finite")
    return value


def _bessel_derivatives(order: float) -> Callable[[Number, int], np.ndarray]:
    def derivatives(z: Number, n: int) -> np.ndarray:
        return np.array([special.jvp(order, z, k) for k in range(n)])
    return derivatives


def _jet(node: Node, center: Number, n: int) -> Jet:
    if isinstance(node, Num):
        return Jet.constant(node.value, center, n)
    if isinstance(node, Var):
        return Jet.variable(center, n)
    if isinstance(node, Neg):
        return -_jet(node.operand, center, n)
    if isinstance(node, BinOp):
        left = _jet(node.left, center, n)
        if node.op == '^':
            if depends_on_x(node.right):
                return jet_exp(jet_mul(_jet(node.right, center, n), jet_log(left)))
            return jet_power(left, _constant_value(node.right))
        right = _jet(node.right, center, n)
        if node.op == '+':
            return left + right
        if node.op == '-':
            return left - right
        if node.op == '*':
            return jet_mul(left, right)
        return jet_div(left, right)
    if node.name == 'besselj':
        if depends_on_x(node.args[0]):
            raise ExprEvaluationError("besselj order must not depend on x")
        order = _constant_value(node.args[0])
        return jet_compose(_bessel_derivatives(order), _jet(node.args[1], center, n))
    arg = _jet(node.args[0], center, n)
    if node.name in ('sin', 'cos'):
        sin_jet, cos_jet = jet_sincos(arg)
        return sin_jet if node.name == 'sin' else cos_jet
    if node.name == 'exp':
        return jet_exp(arg)
    if node.name == 'log':
        return jet_log(arg)
    return jet_power(arg, 0.5)


class ExprFunction:
    """
    파싱된 수식 함수 (불변)

    사용 예:
        g = parse("x^2+x")
        g(2.0)                  # 6.0
        g.jet(2.0, 3).coeffs    # [6, 5, 1]
    """

    def __init__(self, ast: Node, source: Optional[str] = None):
        self._ast = ast
        self._source = source if source is not None else to_source(ast)

    @property
    def ast(self) -> Node:
        return self._ast

    @property
    def source(self) -> str:
        """원본 수식 문자열"""
        return self._source

    def __str__(self) -> str:
        return to_source(self._ast)

    def __repr__(self) -> str:
        return f"ExprFunction({self._source!r})"

    def __call__(self, x: Number) -> Number:
        return self.evaluate(x)

    def evaluate(self, x: Number) -> Number:
        """
        값 평가

        Args:
            x: 스칼라 또는 배열

        Returns:
            x 와 같은 형태의 값

        Raises:
            ExprEvaluationError: 정의역 위반 (결과가 유한하지 않음)
        """
        with np.errstate(all='ignore'):
            value = np.asarray(_evaluate(self._ast, x), dtype=float)
        if not np.all(np.isfinite(value)):
            raise ExprEvaluationError(f"'{self._source}' is not finite on the requested points")
        if np.ndim(x) == 0:
            return float(value)
        if value.shape != np.shape(x):
            value = np.broadcast_to(value, np.shape(x)).copy()
        return value

    def jet(self, center: Number, n: int) -> Jet:
        """
        Jet 평가: 계수 j = f^(j)(center)/j!

        Raises:
            ExprEvaluationError: 정의역 위반
        """
        try:
            with np.errstate(all='ignore'):
                result = _jet(self._ast, center, n)
        except JetError as exc:
            raise ExprEvaluationError(f"'{self._source}' at {center}: {exc}") from exc
        if not np.all(np.isfinite(result.coeffs)):
            raise ExprEvaluationError(f"'{self._source}' has non-finite derivatives at {center}")
        return result

    def derivative(self, x: Number, order: int = 1) -> Number:
        """order 차 도함수 값"""
        return self.jet(x, order + 1).derivatives()[order]

    def compose(self, inner: 'ExprFunction') -> 'ExprFunction':
        """x 를 inner 로 치환한 함수"""
        return ExprFunction(_substitute(self._ast, inner.ast))

    def depends_on_x(self) -> bool:
        return depends_on_x(self._ast)


def parse(src: str) -> ExprFunction:
    """
    수식 문자열 파싱

    Args:
        src: 수식 (예: "x^2+x", "cos(x)")

    Returns:
        ExprFunction

    Raises:
        ExprSyntaxError: 구문 오류 (열 위치 포함) 또는 알 수 없는 식별자
    """
    if not src or not src.strip():
        raise ExprSyntaxError("Empty expression")
    try:
        tree = _PARSER.parse(src)
        ast = _AstBuilder().transform(tree)
    except UnexpectedInput as exc:
        column = getattr(exc, 'column', None)
        raise ExprSyntaxError(f"Cannot parse '{src}'", position=column) from None
    except VisitError as exc:
        if isinstance(exc.orig_exc, ExprError):
            raise exc.orig_exc from None
        raise
    return ExprFunction(ast, source=src)


def eval_jet(fn: ExprFunction, center: Number, n: int) -> Jet:
    """fn 의 center 에서의 길이 n jet"""
    return fn.jet(center, n)


# ===== oscillator classification =====

class CriticalKind(Enum):
    """임계점 종류"""
    ZERO = 'zero'
    STATIONARY = 'stationary'


class StationaryType(Enum):
    """정류점 유형 (I: g != 0, II: g == 0)"""
    I = 'I'
    II = 'II'


@dataclass(frozen=True)
class CriticalPoint:
    """진동자 g 의 임계점"""
    location: float
    kind: CriticalKind
    order_r: int = 0
    stationary_type: Optional[StationaryType] = None
    at_endpoint: bool = False

    def __str__(self) -> str:
        where = "endpoint" if self.at_endpoint else "interior"
        if self.kind is CriticalKind.STATIONARY:
            return (f"stationary(r={self.order_r}, type {self.stationary_type.value}) "
                    f"at x={self.location:.15g} ({where})")
        return f"zero at x={self.location:.15g} ({where})"


def _roots_on_grid(values: np.ndarray, grid: np.ndarray, tol: float,
                   fn: Callable[[float], float]) -> List[float]:
    """격자 위 근접 영점 + 부호 변화 구간 brentq"""
    roots = [float(grid[i]) for i in np.nonzero(np.abs(values) <= tol)[0]]
    xtol = 1e-15 * max(1.0, abs(grid[0]), abs(grid[-1]))
    for i in np.nonzero(values[:-1] * values[1:] < 0)[0]:
        roots.append(optimize.brentq(fn, grid[i], grid[i + 1], xtol=xtol))
    return roots


def _cluster(points: List[float], distance: float) -> List[List[float]]:
    clusters: List[List[float]] = []
    for p in sorted(points):
        if clusters and p - clusters[-1][-1] <= distance:
            clusters[-1].append(p)
        else:
            clusters.append([p])
    return clusters


def find_critical_points(g: ExprFunction, a: float, b: float,
                         panels: Optional[int] = None,
                         tol: Optional[float] = None) -> List[CriticalPoint]:
    """
    [a, b] 의 모든 g 영점과 g' 영점 탐색 (여러 개여도 예외 없음)

    Args:
        g: 진동자
        a, b: 구간 (a < b)
        panels: 스캔 패널 수 (기본: 설정값 2048)
        tol: 상대 허용오차 (기본: 1e-11)

    Returns:
        위치 순으로 정렬된 CriticalPoint 리스트
    """
    if not a < b:
        raise DomainError(f"Interval requires a < b, got [{a}, {b}]")
    settings = get_settings()
    panels = panels or settings.scan_panels
    tol = settings.critical_tol if tol is None else tol

    grid = np.linspace(a, b, panels + 1)
    grid_jet = g.jet(grid, 2)
    g_values = grid_jet.coeffs[0]
    d_values = grid_jet.coeffs[1]
    zero_tol = tol * (1.0 + float(np.max(np.abs(g_values))))
    stat_tol = tol * (1.0 + float(np.max(np.abs(d_values))))

    def g_at(t: float) -> float:
        return float(g.evaluate(t))

    def d_at(t: float) -> float:
        return float(g.derivative(t))

    candidates = (_roots_on_grid(g_values, grid, zero_tol, g_at)
                  + _roots_on_grid(d_values, grid, stat_tol, d_at))
    spacing = (b - a) / panels

    points: List[CriticalPoint] = []
    for cluster in _cluster(candidates, 2.0 * spacing):
        location = min(cluster, key=lambda t: abs(g_at(t)) + abs(d_at(t)))
        for end in (a, b):
            if abs(location - end) <= 2.0 * spacing:
                end_jet = g.jet(end, 2)
                if abs(end_jet.coeffs[0]) <= zero_tol or abs(end_jet.coeffs[1]) <= stat_tol:
                    location = end
        point = _classify_point(g, location, zero_tol, stat_tol, location in (a, b))
        if point is not None:
            points.append(point)

    logger.debug(f"find_critical_points on [{a}, {b}]: {[str(p) for p in points]}")
    return points


def _classify_point(g: ExprFunction, location: float, zero_tol: float,
                    stat_tol: float, at_endpoint: bool) -> Optional[CriticalPoint]:
    derivs = g.jet(location, _ORDER_SCAN).derivatives()
    is_zero = abs(derivs[0]) <= zero_tol
    if abs(derivs[1]) <= stat_tol:
        nonzero = [j for j in range(2, _ORDER_SCAN) if abs(derivs[j]) > stat_tol]
        if not nonzero:
            raise ClassificationError(
                f"Oscillator is flat to order {_ORDER_SCAN - 1} at x={location}"
            )
        return CriticalPoint(
            location=location,
            kind=CriticalKind.STATIONARY,
            order_r=nonzero[0] - 1,
            stationary_type=StationaryType.II if is_zero else StationaryType.I,
            at_endpoint=at_endpoint,
        )
    if is_zero:
        return CriticalPoint(location=location, kind=CriticalKind.ZERO,
                             at_endpoint=at_endpoint)
    return None


def classify_oscillator(g: ExprFunction, a: float, b: float,
                        panels: Optional[int] = None,
                        tol: Optional[float] = None) -> List[CriticalPoint]:
    """
    진동자 분류: 임계점이 없거나 하나인 경우만 허용

    Returns:
        빈 리스트 또는 CriticalPoint 하나

    Raises:
        SubdivideRequiredError: 임계점이 둘 이상 (모든 점을 포함)
    """
    points = find_critical_points(g, a, b, panels=panels, tol=tol)
    if len(points) > 1:
        raise SubdivideRequiredError(
            f"{len(points)} critical points on [{a}, {b}]: "
            + "; ".join(str(p) for p in points),
            points=points,
        )
    return points
