"""
Sweep Report Module

omega 스윕 실행, 오차 기울기 적합, CSV 출력
"""

import csv
import logging
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from .exceptions import DomainError
from .settings import get_settings

logger = logging.getLogger(__name__)

Scalar = Union[float, complex]

CSV_COLUMNS = ('omega', 'method_id', 'value', 'abs_error', 'scaled_error')


def geometric_grid(omega_min: float, omega_max: float, points: int) -> np.ndarray:
    """등비 omega 격자 (points == 1 이면 omega_min 하나)"""
    if points < 1:
        raise DomainError(f"Grid needs at least one point, got {points}")
    if not 0 < omega_min <= omega_max:
        raise DomainError(f"Grid requires 0 < omega_min <= omega_max, got {omega_min}, {omega_max}")
    if points == 1:
        return np.array([float(omega_min)])
    if omega_min == omega_max:
        raise DomainError("A multi-point grid needs omega_min < omega_max")
    return np.geomspace(omega_min, omega_max, points)


@dataclass(frozen=True)
class EnvelopeWindow:
    """
    오차 포락선 창

    각 격자점 omega 에서 [omega, omega + period) 를 samples 개 점으로 훑고
    그중 최대 오차를 기록 (진동하는 오차가 0 근처를 지나는 점 제외)
    """
    period: float
    samples: int

    def __post_init__(self):
        if not self.period > 0:
            raise DomainError(f"Envelope period must be positive, got {self.period}")
        if self.samples < 1:
            raise DomainError(f"Envelope needs at least one sample, got {self.samples}")

    def frequencies(self, omega: float) -> np.ndarray:
        return omega + self.period * np.arange(self.samples) / self.samples


def oscillation_window(frequencies: Sequence[float]) -> Optional[EnvelopeWindow]:
    """
    오차 진동수에서 포락선 창 생성

    Args:
        frequencies: 오차 성분의 omega 진동수 (예: |g(a)|, |g(b)|), 0 은 무시

    Returns:
        가장 느린 진동 한 주기 길이의 창, 진동 성분이 없으면 None
    """
    rates = [abs(float(f)) for f in frequencies if abs(float(f)) > 0]
    if not rates:
        return None
    settings = get_settings()
    slow, fast = min(rates), max(rates)
    samples = int(math.ceil(settings.envelope_per_cycle * fast / slow))
    if samples > settings.envelope_max_samples:
        logger.warning(f"Envelope needs {samples} samples per window, "
                       f"capped at {settings.envelope_max_samples}")
        samples = settings.envelope_max_samples
    return EnvelopeWindow(period=2.0 * math.pi / slow, samples=samples)


@dataclass(frozen=True)
class SlopeFit:
    """log|error| = slope * log(omega) + intercept 최소제곱 적합"""
    slope: float
    intercept: float
    band: float
    points_used: int
    clamped: int = 0

    def __str__(self) -> str:
        band = f" +/- {self.band:.3f} (95%)" if math.isfinite(self.band) else ""
        note = f", {self.clamped} clamped" if self.clamped else ""
        return f"slope {self.slope:.4f}{band} over {self.points_used} points{note}"


def fit_start(count: int) -> int:
    """적합에 쓰는 상위 절반의 첫 인덱스 (점이 둘 이상 남도록)"""
    return min(count // 2, max(count - 2, 0))


def fit_slope(omegas: Sequence[float], errors: Sequence[float],
              floors: Optional[Sequence[float]] = None) -> Optional[SlopeFit]:
    """
    상위 절반 격자에서 log-log 기울기 적합

    Args:
        omegas: 증가하는 omega 격자
        errors: 절대 오차
        floors: 점별 하한 (이하 오차는 하한으로 고정하고 표시)

    Returns:
        SlopeFit, 점이 둘 미만이면 None
    """
    omegas = np.asarray(omegas, dtype=float)
    errors = np.asarray(errors, dtype=float)
    floors = (np.full_like(errors, np.finfo(float).tiny) if floors is None
              else np.maximum(np.asarray(floors, dtype=float), np.finfo(float).tiny))
    start = fit_start(len(omegas))
    x = np.log(omegas[start:])
    clamped_mask = errors[start:] <= floors[start:]
    y = np.log(np.where(clamped_mask, floors[start:], errors[start:]))
    if len(x) < 2:
        return None

    fit = stats.linregress(x, y)
    band = float('nan')
    if len(x) > 2:
        band = float(stats.t.ppf(0.975, len(x) - 2) * fit.stderr)
    return SlopeFit(slope=float(fit.slope), intercept=float(fit.intercept), band=band,
                    points_used=len(x), clamped=int(np.sum(clamped_mask)))


@dataclass(frozen=True)
class SweepRow:
    omega: float
    method_id: str
    value: Scalar
    abs_error: float
    scaled_error: float
    floor: float = 0.0

    @property
    def clamped(self) -> bool:
        return self.abs_error <= self.floor


@dataclass
class SweepReport:
    """
    스윕 결과

    rows 는 (omega, 방법 순서) 로 정렬
    """
    omegas: np.ndarray
    method_ids: List[str]
    rows: List[SweepRow]
    fits: Dict[str, Optional[SlopeFit]] = field(default_factory=dict)
    metadata: Dict[str, str] = field(default_factory=dict)

    def errors(self, method_id: str) -> np.ndarray:
        return np.array([row.abs_error for row in self.rows if row.method_id == method_id])

    def floors(self, method_id: str) -> np.ndarray:
        return np.array([row.floor for row in self.rows if row.method_id == method_id])

    def fit_all(self) -> None:
        for method_id in self.method_ids:
            self.fits[method_id] = fit_slope(self.omegas, self.errors(method_id),
                                             self.floors(method_id))
            clamped = sum(1 for row in self.rows if row.method_id == method_id and row.clamped)
            if clamped:
                logger.warning(f"{method_id}: {clamped} error(s) below the reference floor, clamped")

    def scaled_spread(self, method_id: str) -> float:
        """상위 절반 격자의 max/min scaled_error (0 이 있으면 inf)"""
        scaled = np.array([row.scaled_error for row in self.rows if row.method_id == method_id])
        scaled = scaled[fit_start(len(scaled)):]
        if scaled.size == 0:
            return float('nan')
        low = float(np.min(scaled))
        return float(np.max(scaled)) / low if low > 0 else float('inf')

    def median_ratio(self, numerator: str, denominator: str) -> float:
        """오차 비의 중앙값"""
        num = self.errors(numerator)
        den = self.errors(denominator)
        ratios = [n / d for n, d in zip(num, den) if d > 0]
        return statistics.median(ratios) if ratios else float('nan')

    def summary_lines(self) -> List[str]:
        lines = []
        for method_id in self.method_ids:
            fit = self.fits.get(method_id)
            lines.append(f"{method_id}: {fit if fit is not None else 'slope n/a (fewer than 2 points)'}")
        return lines

    def write_csv(self, path: Union[str, Path]) -> None:
        """
        CSV 저장 (17 유효숫자, '\\n' 줄바꿈, 헤더 포함)
        """
        digits = get_settings().significant_digits
        fmt = f"%.{digits}g"
        with open(path, 'w', newline='', encoding='utf-8') as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(CSV_COLUMNS)
            for row in self.rows:
                writer.writerow([
                    fmt % row.omega,
                    row.method_id,
                    _format_value(row.value, fmt),
                    fmt % row.abs_error,
                    fmt % row.scaled_error,
                ])
        logger.info(f"Wrote {len(self.rows)} rows to {path}")


def _format_value(value: Scalar, fmt: str) -> str:
    if isinstance(value, complex):
        return f"{fmt % value.real}{'+' if value.imag >= 0 else '-'}{fmt % abs(value.imag)}j"
    return fmt % value


# method_id -> (callable omega -> value, expected decay rate)
MethodTable = Dict[str, Tuple[Callable[[float], Scalar], float]]

# omega -> (reference value, error floor)
Reference = Callable[[float], Tuple[Scalar, float]]


def run_sweep(omegas: Sequence[float], methods: MethodTable, reference: Reference,
              workers: Optional[int] = None,
              metadata: Optional[Dict[str, str]] = None,
              window: Optional[EnvelopeWindow] = None) -> SweepReport:
    """
    omega 격자에서 각 방법의 오차 계산 (점별 병렬)

    Args:
        omegas: 증가하는 격자
        methods: 방법 id -> (omega -> 값, 기대 감쇠율)
        reference: omega -> (기준값, 오차 하한)
        workers: 스레드 수 (기본: 설정값)
        window: 지정하면 abs_error 는 창 안의 최대 오차 (value 는 격자점 값)

    Returns:
        기울기가 적합된 SweepReport
    """
    grid = np.asarray(omegas, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise DomainError("Sweep grid must be strictly increasing")
    workers = workers or get_settings().workers
    method_ids = list(methods)

    def evaluate(omega: float) -> List[SweepRow]:
        samples = window.frequencies(omega) if window is not None else [omega]
        values: Dict[str, Scalar] = {}
        worst = dict.fromkeys(method_ids, 0.0)
        floor = 0.0
        for sample in samples:
            ref_value, ref_floor = reference(float(sample))
            floor = max(floor, ref_floor)
            for method_id in method_ids:
                value = methods[method_id][0](float(sample))
                values.setdefault(method_id, value)
                worst[method_id] = max(worst[method_id], float(abs(value - ref_value)))
        rows = [
            SweepRow(omega=float(omega), method_id=method_id, value=values[method_id],
                     abs_error=worst[method_id],
                     scaled_error=worst[method_id] * omega ** methods[method_id][1],
                     floor=floor)
            for method_id in method_ids
        ]
        logger.info(f"sweep omega={omega:.6g} done ({len(samples)} sample(s))")
        return rows

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        per_point = list(pool.map(evaluate, grid))

    report = SweepReport(omegas=grid, method_ids=method_ids,
                         rows=[row for rows in per_point for row in rows],
                         metadata=dict(metadata or {}))
    if window is not None:
        report.metadata.setdefault('envelope', f"{window.samples} samples over {window.period:.6g}")
    report.fit_all()
    return report
