"""
Settings Module

패키지 기본 수치 상수 로딩
- defaults.yaml (패키지 내장) -> Settings 데이터클래스
- 로깅 설정
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).parent / 'defaults.yaml'


@dataclass(frozen=True)
class Settings:
    """수치 기본값 (불변)"""
    lommel_rtol: float
    zero_scan_step: float
    jet_zero_threshold: float
    scan_panels: int
    critical_tol: float
    oracle_tol: float
    rule_points: int
    max_levels: int
    cost_guard: float
    grading_ratio: float
    grading_depth: float
    phase_samples: int
    crossover_omega: float
    fallback_tol: float
    max_condition: float
    phase_tol: float
    significant_digits: int
    workers: int
    envelope_per_cycle: int
    envelope_max_samples: int
    log_level: str
    log_format: str

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Settings':
        """
        YAML 섹션 딕셔너리에서 생성

        Args:
            data: defaults.yaml 내용

        Returns:
            Settings 인스턴스
        """
        return cls(
            lommel_rtol=float(data['specfun']['lommel_rtol']),
            zero_scan_step=float(data['specfun']['zero_scan_step']),
            jet_zero_threshold=float(data['jets']['zero_threshold']),
            scan_panels=int(data['expr']['scan_panels']),
            critical_tol=float(data['expr']['critical_tol']),
            oracle_tol=float(data['oracle']['tol']),
            rule_points=int(data['oracle']['rule_points']),
            max_levels=int(data['oracle']['max_levels']),
            cost_guard=float(data['oracle']['cost_guard']),
            grading_ratio=float(data['oracle']['grading_ratio']),
            grading_depth=float(data['oracle']['grading_depth']),
            phase_samples=int(data['oracle']['phase_samples']),
            crossover_omega=float(data['moments']['crossover_omega']),
            fallback_tol=float(data['moments']['fallback_tol']),
            max_condition=float(data['methods']['max_condition']),
            phase_tol=float(data['methods']['phase_tol']),
            significant_digits=int(data['report']['significant_digits']),
            workers=int(data['report']['workers']),
            envelope_per_cycle=int(data['report']['envelope_per_cycle']),
            envelope_max_samples=int(data['report']['envelope_max_samples']),
            log_level=str(data['logging']['level']),
            log_format=str(data['logging']['format']),
        )


def load_settings(path: Optional[Path] = None) -> Settings:
    """
    YAML 파일에서 설정 로드

    Args:
        path: YAML 경로 (기본: 패키지 내장 defaults.yaml)

    Returns:
        Settings 인스턴스
    """
    path = Path(path) if path is not None else DEFAULTS_PATH
    with open(path, 'r', encoding='utf-8') as fh:
        data = yaml.safe_load(fh)
    logger.debug(f"Loaded settings from {path}")
    return Settings.from_dict(data)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """패키지 기본 설정 (캐시됨)"""
    return load_settings()


def configure_logging(level: Optional[str] = None) -> None:
    """
    로깅 설정

    Args:
        level: 로그 레벨 이름 (기본: defaults.yaml의 logging.level)
    """
    settings = get_settings()
    level_name = (level or settings.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        format=settings.log_format,
    )
