#!/usr/bin/env python3
"""
Finite Hankel Transform CLI

명령행 인터페이스
- eval: 한 점에서 변환 계산
- sweep: omega 스윕 후 오차 CSV 와 기울기 요약
- moments: 수정 모멘트 표 CSV
"""

import argparse
import csv
import logging
import sys
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import __version__
from .exceptions import (
    ClassificationError, DomainError, ExprError, HankelError, OracleCostError,
    PlanError, UnsupportedCaseError,
)
from .expr import (
    BinOp, CriticalKind, CriticalPoint, ExprFunction, Num, StationaryType, Var,
    find_critical_points, parse,
)
from .methods import (
    Basis, FilonPlan, Position, TransformSpec, asymptotic_plain, asymptotic_stationary,
    asymptotic_zero, expected_rate, filon, filon_order, zero_sigma_vanishes,
)
from .moments import modified_moments, modified_moments_stationary
from .oracle import reference_hankel
from .report import EnvelopeWindow, geometric_grid, oscillation_window, run_sweep
from .settings import configure_logging, get_settings

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

# 입력/분류 오류 (exit 2); 나머지 HankelError 는 exit 3
USAGE_ERRORS = (ExprError, ClassificationError, UnsupportedCaseError, PlanError, DomainError)


@dataclass(frozen=True)
class MethodToken:
    """방법 지정: asymptotic:M, filon:NODES:MULTS, oracle"""
    kind: str
    m: int = 0
    plan: Optional[FilonPlan] = None
    tol: Optional[float] = None

    @property
    def label(self) -> str:
        if self.kind == 'asymptotic':
            return f"asymptotic_m{self.m}"
        if self.kind == 'filon':
            nodes = ','.join(f"{x:.6g}" for x in self.plan.nodes)
            mults = ','.join(str(m) for m in self.plan.multiplicities)
            return f"filon[{nodes}|{mults}]"
        return 'oracle'


@dataclass(frozen=True)
class Evaluation:
    """eval 결과"""
    value: Scalar
    label: str
    classification: str
    est_abs_error: Optional[float] = None
    pieces: int = 1


def constant(text: str) -> float:
    """상수 수식 ("4/3", "pi/2") -> float (argparse type)"""
    try:
        fn = parse(text)
        if fn.depends_on_x():
            raise argparse.ArgumentTypeError(f"'{text}' must not depend on x")
        return float(fn.evaluate(0.0))
    except HankelError as e:
        raise argparse.ArgumentTypeError(f"invalid constant '{text}': {e}") from e


def _constant_list(text: str) -> List[float]:
    try:
        return [constant(item) for item in text.split(',') if item.strip()]
    except argparse.ArgumentTypeError as e:
        raise PlanError(f"Bad node list '{text}': {e}") from e


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError as e:
        raise PlanError(f"Bad integer list '{text}'") from e


def parse_method(token: str, m: Optional[int] = None, nodes: Optional[str] = None,
                 mults: Optional[str] = None, tol: Optional[float] = None) -> MethodToken:
    """
    방법 토큰 해석

    Args:
        token: 'asymptotic[:M]', 'filon[:NODES:MULTS]', 'oracle'
        m, nodes, mults: 토큰에 없을 때 쓰는 --m, --nodes, --mults 값
    """
    parts = token.split(':')
    kind = parts[0].strip().lower()
    if kind == 'oracle':
        return MethodToken('oracle', tol=tol)
    if kind == 'asymptotic':
        order = m
        if len(parts) > 1:
            try:
                order = int(parts[1])
            except ValueError as e:
                raise PlanError(f"Asymptotic order must be an integer ('{token}')") from e
        if order is None or order < 1:
            raise PlanError(f"Asymptotic method needs an order m >= 1 ('{token}')")
        return MethodToken('asymptotic', m=order)
    if kind == 'filon':
        node_text = parts[1] if len(parts) > 1 else nodes
        mult_text = parts[2] if len(parts) > 2 else mults
        if not node_text or not mult_text:
            raise PlanError(f"Filon method needs nodes and multiplicities ('{token}')")
        return MethodToken('filon', plan=FilonPlan(tuple(_constant_list(node_text)),
                                                   tuple(_int_list(mult_text))))
    raise PlanError(f"Unknown method '{token}' (asymptotic:M, filon:NODES:MULTS, oracle)")


# ===== dispatch =====

def mirror(spec: TransformSpec) -> TransformSpec:
    """x -> a+b-x 치환 (변환값 불변)"""
    reflection = ExprFunction(BinOp('-', Num(spec.a + spec.b), Var('x')))
    return replace(spec, f=spec.f.compose(reflection), g=spec.g.compose(reflection))


def _mirror_plan(plan: FilonPlan, a: float, b: float) -> FilonPlan:
    nodes = tuple(a + b - x for x in reversed(plan.nodes))
    nodes = (a,) + nodes[1:-1] + (b,)
    return FilonPlan(nodes, tuple(reversed(plan.multiplicities)), plan.basis)


def _describe(points: Sequence[CriticalPoint]) -> str:
    if not points:
        return 'no critical points'
    return '; '.join(str(p) for p in points)


def _split_points(points: Sequence[CriticalPoint]) -> List[float]:
    """인접 임계점 사이 중점"""
    locations = [p.location for p in points]
    return [0.5 * (x0 + x1) for x0, x1 in zip(locations, locations[1:])]


def _subplan(plan: FilonPlan, lo: float, hi: float,
             critical: Optional[CriticalPoint]) -> FilonPlan:
    """부분 구간용 Filon 계획: 원래 노드 + 부분 구간 끝점 + 임계점"""
    end_mult = max(plan.multiplicities[0], plan.multiplicities[-1])
    mults: Dict[float, int] = {x: m for x, m in zip(plan.nodes, plan.multiplicities) if lo < x < hi}
    for x in (lo, hi):
        mults.setdefault(x, dict(zip(plan.nodes, plan.multiplicities)).get(x, end_mult))
    if critical is not None:
        factor = critical.order_r + 1 if critical.kind is CriticalKind.STATIONARY else 1
        mults[critical.location] = max(mults.get(critical.location, 0), end_mult * factor)
    nodes = sorted(mults)
    return FilonPlan(tuple(nodes), tuple(mults[x] for x in nodes), plan.basis)


def _single(spec: TransformSpec, method: MethodToken,
            point: Optional[CriticalPoint]) -> Scalar:
    """임계점이 없거나 하나인 구간"""
    if point is not None and point.stationary_type is StationaryType.I:
        raise UnsupportedCaseError(f"Type-I stationary point at x={point.location} is not supported")

    if method.kind == 'asymptotic':
        if point is None:
            return asymptotic_plain(spec, method.m)
        if point.kind is CriticalKind.ZERO:
            return asymptotic_zero(spec, point.location, method.m)
        if point.location == spec.a:
            return asymptotic_stationary(spec, spec.a, point.order_r, method.m)
        if point.location == spec.b:
            logger.info("stationary right endpoint: mirroring x -> a+b-x")
            return asymptotic_stationary(mirror(spec), spec.a, point.order_r, method.m)
        return asymptotic_stationary(spec, point.location, point.order_r, method.m,
                                     Position.INTERIOR)

    plan = method.plan
    if point is None or point.kind is CriticalKind.ZERO:
        return filon(spec, replace(plan, basis=Basis.E))
    if point.location == spec.a:
        return filon(spec, replace(plan, basis=Basis.E_HAT))
    if point.location == spec.b:
        logger.info("stationary right endpoint: mirroring x -> a+b-x")
        mirrored = _mirror_plan(plan, spec.a, spec.b)
        return filon(mirror(spec), replace(mirrored, basis=Basis.E_HAT))
    # interior stationary point: split there
    total: Scalar = 0.0
    for lo, hi in ((spec.a, point.location), (point.location, spec.b)):
        part = replace(spec, a=lo, b=hi)
        edge = replace(point, location=point.location, at_endpoint=True)
        sub = replace(method, plan=_subplan(plan, lo, hi, edge))
        total += _single(part, sub, edge)
    return total


def evaluate_transform(spec: TransformSpec, method: MethodToken) -> Evaluation:
    """
    분류 후 방법 실행; 임계점이 여러 개면 구간을 나눠 합산

    Returns:
        Evaluation
    """
    if method.kind == 'oracle':
        result = reference_hankel(spec, method.tol)
        points = find_critical_points(spec.g, spec.a, spec.b)
        return Evaluation(result.value, method.label, _describe(points), result.est_abs_error)

    points = find_critical_points(spec.g, spec.a, spec.b)
    logger.info(f"classification: {_describe(points)}")
    if len(points) <= 1:
        value = _single(spec, method, points[0] if points else None)
        return Evaluation(value, method.label, _describe(points))

    edges = [spec.a] + _split_points(points) + [spec.b]
    total: Scalar = 0.0
    for (lo, hi), point in zip(zip(edges, edges[1:]), points):
        part = replace(spec, a=lo, b=hi)
        sub = method
        if method.kind == 'filon':
            sub = replace(method, plan=_subplan(method.plan, lo, hi, point))
        total += _single(part, sub, point)
    logger.info(f"summed {len(points)} subintervals")
    return Evaluation(total, method.label, _describe(points), pieces=len(points))


def method_rate(spec: TransformSpec, method: MethodToken) -> float:
    """scaled_error 에 쓰는 기대 감쇠율"""
    if method.kind == 'oracle':
        return 0.0
    points = find_critical_points(spec.g, spec.a, spec.b)
    point = points[0] if points else None
    if point is None:
        m = method.m if method.kind == 'asymptotic' else filon_order(method.plan)
        return expected_rate('plain', m)
    if point.kind is CriticalKind.ZERO:
        if method.kind == 'asymptotic':
            vanishes = zero_sigma_vanishes(spec, point.location, method.m)
            return expected_rate('zero', method.m, sigma_vanishes=vanishes)
        plan = method.plan
        at_zero = [m for x, m in zip(plan.nodes, plan.multiplicities)
                   if abs(x - point.location) <= 1e-9 * (spec.b - spec.a)]
        m = min([filon_order(plan)] + at_zero)
        return expected_rate('zero', m, sigma_vanishes=True)
    r = point.order_r
    if method.kind == 'asymptotic':
        return expected_rate('stationary', method.m, r)
    plan = method.plan
    if point.location == spec.b:
        plan = _mirror_plan(plan, spec.a, spec.b)
    return expected_rate('stationary', filon_order(plan, r), r)


def envelope_window(spec: TransformSpec) -> Optional[EnvelopeWindow]:
    """오차는 omega|g(a)|, omega|g(b)| 로 진동 -> 그 주기의 포락선 창"""
    return oscillation_window([float(spec.g.evaluate(spec.a)), float(spec.g.evaluate(spec.b))])


# ===== commands =====

def _spec_from_args(args, omega: Optional[float] = None) -> TransformSpec:
    return TransformSpec(parse(args.f), parse(args.g), args.a, args.b, args.nu,
                         args.omega if omega is None else omega)


def cmd_eval(args) -> int:
    """eval 명령"""
    spec = _spec_from_args(args)
    method = parse_method(args.method, args.m, args.nodes, args.mults, args.tol)
    result = evaluate_transform(spec, method)
    print(f"value: {result.value:.17g}")
    print(f"method: {result.label}")
    print(f"classification: {result.classification}")
    if result.pieces > 1:
        print(f"subintervals: {result.pieces}")
    if result.est_abs_error is not None:
        print(f"est_abs_error: {result.est_abs_error:.3g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    """sweep 명령"""
    grid = geometric_grid(args.omega_min, args.omega_max, args.points)
    tokens = [parse_method(t, args.m, args.nodes, args.mults) for t in (args.method or [])]
    if not tokens:
        raise PlanError("sweep needs at least one --method")
    first = _spec_from_args(args, omega=float(grid[0]))

    methods: Dict[str, Tuple[Callable[[float], Scalar], float]] = {}
    for token in tokens:
        def run(omega: float, token: MethodToken = token) -> Scalar:
            return evaluate_transform(_spec_from_args(args, omega), token).value
        methods[token.label] = (run, method_rate(first, token))

    finest = max((t for t in tokens if t.kind != 'oracle'),
                 key=lambda t: methods[t.label][1], default=None)
    tol = args.tol or get_settings().oracle_tol

    def reference(omega: float) -> Tuple[Scalar, float]:
        spec = _spec_from_args(args, omega)
        if args.reference == 'oracle':
            try:
                result = reference_hankel(spec, tol)
                return result.value, result.est_abs_error + tol * abs(result.value)
            except OracleCostError as exc:
                if finest is None:
                    raise
                logger.warning(f"omega={omega:.6g}: {exc}; comparing against {finest.label}")
        if finest is None:
            raise PlanError("--reference finest needs a non-oracle method")
        return evaluate_transform(spec, finest).value, 0.0

    metadata = {
        'spec': str(first),
        'reference': args.reference,
        'version': __version__,
    }
    window = envelope_window(first) if args.envelope else None
    report = run_sweep(grid, methods, reference, workers=args.workers, metadata=metadata,
                       window=window)
    report.write_csv(args.out)
    for line in report.summary_lines():
        print(line)
    return EXIT_OK


def cmd_moments(args) -> int:
    """moments 명령"""
    g = parse(args.g)
    if args.stationary_r is not None:
        table = modified_moments_stationary(g, args.a, args.b, args.nu, args.omega,
                                            args.stationary_r, args.count)
    else:
        table = modified_moments(g, args.a, args.b, args.nu, args.omega, args.count)

    digits = get_settings().significant_digits
    fmt = f"%.{digits}g"
    fh = open(args.out, 'w', newline='', encoding='utf-8') if args.out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(('k', 'value_re', 'value_im', 'provenance', 'stable'))
        for k, value, provenance, stable in table.rows():
            value = complex(value)
            writer.writerow((k, fmt % value.real, fmt % value.imag, provenance.value,
                             'true' if stable else 'false'))
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def _add_problem_arguments(parser: argparse.ArgumentParser, with_f: bool = True) -> None:
    if with_f:
        parser.add_argument('--f', required=True, help='Amplitude f(x), e.g. "cos(x)"')
    parser.add_argument('--g', required=True, help='Oscillator g(x), e.g. "x^2+x"')
    parser.add_argument('--a', type=constant, required=True, help='Left endpoint')
    parser.add_argument('--b', type=constant, required=True, help='Right endpoint')
    parser.add_argument('--nu', type=constant, required=True, help='Bessel order')


def _add_method_arguments(parser: argparse.ArgumentParser, repeatable: bool) -> None:
    parser.add_argument(
        '--method', action='append' if repeatable else 'store', required=not repeatable,
        help='asymptotic[:M] | filon[:NODES:MULTS] | oracle'
    )
    parser.add_argument('--m', type=int, help='Asymptotic order for a bare "asymptotic"')
    parser.add_argument('--nodes', help='Filon nodes, comma separated (e.g. 1,4/3,5/3,2)')
    parser.add_argument('--mults', help='Filon multiplicities, comma separated')
    parser.add_argument('--tol', type=float, help='Oracle tolerance (>= 1e-13)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='finite-hankel',
        description='Finite Hankel transforms int_a^b f(x) J_nu(omega g(x)) dx',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Expressions: numbers, x, pi, e, + - * / ^, sin cos exp log sqrt, besselj(order, arg)

Examples:
  %(prog)s eval --f "cos(x)" --g "x^2+x" --a 1 --b 2 --nu 1 --omega 100 --method asymptotic:1
  %(prog)s eval --f "exp(x)" --g "x^2" --a 0 --b 1 --nu 2 --omega 100 --method filon:0,1:2,1
  %(prog)s sweep --f "sin(x)" --g "x" --a 0 --b 1 --nu 2 --omega-min 100 --omega-max 10000 \\
      --points 20 --method asymptotic:1 --method asymptotic:2 --out zero.csv
  %(prog)s moments --g "x" --a 1 --b 2 --nu 1 --omega 100 --count 5
        """
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    p_eval = sub.add_parser('eval', help='Evaluate one transform')
    _add_problem_arguments(p_eval)
    p_eval.add_argument('--omega', type=constant, required=True, help='Frequency')
    _add_method_arguments(p_eval, repeatable=False)
    p_eval.set_defaults(handler=cmd_eval)

    p_sweep = sub.add_parser('sweep', help='Error sweep over a geometric omega grid')
    _add_problem_arguments(p_sweep)
    p_sweep.add_argument('--omega-min', type=constant, required=True)
    p_sweep.add_argument('--omega-max', type=constant, required=True)
    p_sweep.add_argument('--points', type=int, default=20, help='Grid size (default: 20)')
    p_sweep.add_argument('--out', required=True, help='CSV output path')
    p_sweep.add_argument('--reference', choices=('oracle', 'finest'), default='oracle',
                         help='Error reference (default: oracle)')
    p_sweep.add_argument('--workers', type=int, help='Concurrent sweep points')
    p_sweep.add_argument('--envelope', action='store_true',
                         help='Record the max error over one oscillation period per point')
    _add_method_arguments(p_sweep, repeatable=True)
    p_sweep.set_defaults(handler=cmd_sweep)

    p_mom = sub.add_parser('moments', help='Modified moment table')
    _add_problem_arguments(p_mom, with_f=False)
    p_mom.add_argument('--omega', type=constant, required=True, help='Frequency')
    p_mom.add_argument('--count', type=int, required=True, help='Number of moments')
    p_mom.add_argument('--stationary-r', type=int, help='Stationary order at x=a (hat basis)')
    p_mom.add_argument('--out', help='CSV output path (default: stdout)')
    p_mom.set_defaults(handler=cmd_moments)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """메인 함수"""
    parser = build_parser()
    try:
        # argparse reports its own usage errors with SystemExit(2)
        args = parser.parse_args(argv)
        configure_logging('DEBUG' if args.verbose else None)
        return args.handler(args)
    except USAGE_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HankelError as e:
        print(f"Numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == '__main__':
    sys.exit(main())
