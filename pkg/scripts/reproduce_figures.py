#!/usr/bin/env python3
"""
Convergence Sweep Reproduction Script

omega in [1e2, 1e4] 스윕으로 각 방법의 오차 기울기 확인
케이스별 CSV 저장, 기대 기울기와 비교

- 오차는 격자점마다 가장 느린 진동 한 주기 창의 최대값 (포락선)
- 기준값은 케이스 진동자에 맞는 고차 점근 전개, 적합 구간 시작점에서 기준 적분기와 대조
- 적합 구간 (상위 절반) 에서 scaled_error 의 max/min <= 20
"""

import sys
import os
import argparse
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

# 로깅 설정
logging.basicConfig(
    level=logging.WARNING,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# 상위 절반 격자에서 scaled_error 의 max/min 한계
SCALED_SPREAD_LIMIT = 20.0

# 기준 적분기 대조: 상대 허용 오차
CROSS_CHECK_RTOL = 1e-9


@dataclass(frozen=True)
class Case:
    """스윕 케이스: 문제 + (방법 토큰, 기대 기울기, 허용 편차) 목록"""
    name: str
    f: str
    g: str
    a: float
    b: float
    nu: float
    methods: Tuple[Tuple[str, float, float], ...]
    # (분자 방법, 분모 방법): 오차비 중앙값 < 1 이어야 함
    better: Optional[Tuple[str, str]] = None
    # 오차 기준값 방법 (검사하는 방법보다 충분히 높은 차수)
    reference: str = 'asymptotic:6'


CASES = (
    Case('plain', 'cos(x)', 'x^2+x', 1.0, 2.0, 1.0, (
        ('asymptotic:1', -2.5, 0.15),
        ('asymptotic:2', -3.5, 0.15),
        ('asymptotic:3', -4.5, 0.15),
        ('filon:1,2:1,1', -2.5, 0.15),
        ('filon:1,4/3,5/3,2:1,1,1,1', -2.5, 0.15),
        ('filon:1,4/3,5/3,2:2,2,2,2', -3.5, 0.15),
    ), better=('filon[1,1.33333,1.66667,2|1,1,1,1]', 'asymptotic_m1')),
    Case('zero', 'sin(x)', 'x', 0.0, 1.0, 2.0, (
        ('asymptotic:1', -2.0, 0.15),
        ('asymptotic:2', -3.5, 0.15),
        ('asymptotic:3', -4.5, 0.15),
    )),
    Case('zero_filon', '1', 'sin(x)', 0.0, 1.0, 0.0, (
        ('filon:0,1:1,1', -2.5, 0.15),
        ('filon:0,1/3,2/3,1:1,1,1,1', -2.5, 0.15),
        ('filon:0,1/3,2/3,1:3,1,1,3', -4.5, 0.2),
    )),
    Case('stationary', 'exp(x)', 'x^2', 0.0, 1.0, 2.0, (
        ('asymptotic:1', -1.5, 0.15),
        ('asymptotic:2', -2.5, 0.15),
        ('asymptotic:3', -3.5, 0.15),
        ('filon:0,1:2,1', -1.5, 0.15),
        ('filon:0,1/3,2/3,1:2,1,1,1', -1.5, 0.15),
        ('filon:0,1:4,2', -2.5, 0.15),
    )),
)


def run_case(case: Case, omega_min: float, omega_max: float, points: int,
             out_dir: str, workers: int) -> bool:
    """
    케이스 하나 스윕

    Returns:
        기준값 대조, 모든 기울기와 scaled_error 범위가 허용 범위 안이면 True
    """
    from finite_hankel import TransformSpec, parse, reference_hankel
    from finite_hankel.cli import envelope_window, evaluate_transform, method_rate, parse_method
    from finite_hankel.report import fit_start, geometric_grid, run_sweep

    f, g = parse(case.f), parse(case.g)

    def spec_at(omega: float) -> TransformSpec:
        return TransformSpec(f, g, case.a, case.b, case.nu, omega)

    tokens = [parse_method(text) for text, _, _ in case.methods]
    expected: Dict[str, Tuple[float, float]] = {}
    methods = {}
    for token, (_, slope, band) in zip(tokens, case.methods):
        def run(omega: float, token=token):
            return evaluate_transform(spec_at(omega), token).value
        methods[token.label] = (run, method_rate(spec_at(omega_min), token))
        expected[token.label] = (slope, band)

    reference_token = parse_method(case.reference)

    def reference(omega: float):
        value = evaluate_transform(spec_at(omega), reference_token).value
        return value, 64.0 * np.finfo(float).eps * abs(value)

    grid = geometric_grid(omega_min, omega_max, points)
    print(f"\n[CASE] {case.name}: {spec_at(omega_min)}")

    # 적합 구간 시작점에서 기준값을 기준 적분기와 대조
    check_omega = float(grid[fit_start(len(grid))])
    oracle = reference_hankel(spec_at(check_omega), tol=1e-12)
    difference = abs(reference(check_omega)[0] - oracle.value)
    limit = CROSS_CHECK_RTOL * abs(oracle.value) + 10.0 * oracle.est_abs_error
    ok = difference <= limit
    print(f"  [{'OK' if ok else 'FAIL'}] reference {reference_token.label} vs oracle "
          f"at omega={check_omega:.6g}: |diff| = {difference:.3g} (limit {limit:.3g})")

    window = envelope_window(spec_at(omega_min))
    report = run_sweep(grid, methods, reference, workers=workers, window=window,
                       metadata={'case': case.name, 'spec': str(spec_at(omega_min)),
                                 'reference': reference_token.label})
    path = os.path.join(out_dir, f"{case.name}.csv")
    report.write_csv(path)
    print(f"  CSV: {path}")
    if window is not None:
        print(f"  envelope: {window.samples} samples over omega + [0, {window.period:.4g})")

    for label, (slope, band) in expected.items():
        fit = report.fits[label]
        spread = report.scaled_spread(label)
        passed = (fit is not None and abs(fit.slope - slope) <= band
                  and spread <= SCALED_SPREAD_LIMIT)
        ok = ok and passed
        status = 'OK' if passed else 'FAIL'
        print(f"  [{status}] {label}: {fit} (expected {slope:+.2f} +/- {band}), "
              f"scaled max/min {spread:.3g}")

    if case.better:
        ratio = report.median_ratio(*case.better)
        passed = ratio < 1.0
        ok = ok and passed
        print(f"  [{'OK' if passed else 'FAIL'}] median error ratio "
              f"{case.better[0]} / {case.better[1]} = {ratio:.3g}")
    return ok


def main():
    """메인 함수"""
    parser = argparse.ArgumentParser(
        description='Reproduce the convergence sweeps of the finite Hankel methods',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s                           # All cases, CSV files in ./sweeps
  %(prog)s --case plain --case zero  # Selected cases
  %(prog)s --points 10 -v            # Coarser grid, debug logging
        """
    )

    parser.add_argument('--case', action='append', choices=[c.name for c in CASES],
                        help='Case to run (repeatable, default: all)')
    parser.add_argument('--omega-min', type=float, default=1e2)
    parser.add_argument('--omega-max', type=float, default=1e4)
    parser.add_argument('--points', type=int, default=20)
    parser.add_argument('--out-dir', default='sweeps', help='CSV directory')
    parser.add_argument('--workers', type=int, default=4)
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable debug logging')

    args = parser.parse_args()

    # Add src to path
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))
    from finite_hankel import HankelError

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    os.makedirs(args.out_dir, exist_ok=True)

    selected: List[Case] = [c for c in CASES if not args.case or c.name in args.case]

    print(f"\n{'='*60}")
    print("Finite Hankel Convergence Sweeps")
    print(f"{'='*60}")
    print(f"omega: [{args.omega_min:g}, {args.omega_max:g}], {args.points} points")
    print(f"{'='*60}")

    failures = []
    for case in selected:
        try:
            if not run_case(case, args.omega_min, args.omega_max, args.points,
                            args.out_dir, args.workers):
                failures.append(case.name)
        except HankelError as e:
            print(f"\n[FAIL] {case.name}: {e}")
            logger.exception("Sweep failed")
            failures.append(case.name)

    print(f"\n{'='*60}")
    if failures:
        print(f"[FAIL] {', '.join(failures)}")
    else:
        print("[SUCCESS] All slopes within tolerance")
    print(f"{'='*60}\n")
    return 1 if failures else 0


if __name__ == '__main__':
    sys.exit(main())
