"""
Finite Hankel Transform Library

유한 Hankel 변환 H_nu[f](omega) = int_a^b f(x) J_nu(omega g(x)) dx 의
고주파 근사 라이브러리
- 점근 전개 (일반, 영점, 정류점)
- Filon 형 보간 적분 (수정 모멘트)
- 진동 해상 기준 적분기
- Airy 변환, Fourier-Bessel 계수

사용 예:
    from finite_hankel import TransformSpec, FilonPlan, parse, asymptotic_plain, filon

    spec = TransformSpec(parse('cos(x)'), parse('x^2+x'), 1.0, 2.0, nu=1.0, omega=100.0)
    print(asymptotic_plain(spec, m=2))
    print(filon(spec, FilonPlan((1.0, 2.0), (2, 2))))
"""

__version__ = '1.0.0'
__author__ = 'CRK'

# Expressions
from .expr import (
    ExprFunction, CriticalKind, StationaryType, CriticalPoint,
    parse, eval_jet, find_critical_points, classify_oscillator
)

# Special functions
from .specfun import (
    SpecFunResult, gamma, bessel_j, lommel_s, bessel_zeros, bessel_zero, airy_ai_neg
)

# Jets
from .jets import Jet

# Sigma sequences
from .sigma import SigmaVariant, SigmaSequence, sigma_plain, sigma_tilde, sigma_hat

# Moments
from .moments import (
    Provenance, MomentTable,
    moment_power, modified_moments, modified_moments_stationary,
    generalized_moment, generalized_moments
)

# Methods
from .methods import (
    TransformSpec, Basis, Position, FilonPlan, FilonInterpolant,
    asymptotic_plain, asymptotic_zero, asymptotic_stationary, asymptotic_remainder,
    filon, filon_coeffs, expected_rate, filon_order
)

# Reference integrator
from .oracle import OracleResult, integrate_oscillatory, reference_hankel

# Applications
from .applications import FourierBesselSeries, airy_transform, fourier_bessel_coeffs

# Sweeps
from .report import SlopeFit, SweepReport, geometric_grid, fit_slope, run_sweep

# Settings
from .settings import Settings, get_settings, load_settings, configure_logging

# Exceptions
from .exceptions import (
    HankelError,
    DomainError,
    UnreachableAccuracyError,
    JetError,
    SingularDivisionError,
    NonRemovableSingularityError,
    ExprError,
    ExprSyntaxError,
    ExprEvaluationError,
    ClassificationError,
    SubdivideRequiredError,
    WrongMethodError,
    UnsupportedCaseError,
    PlanError,
    ConditioningError,
    OracleCostError,
    ToleranceError
)

__all__ = [
    # Version
    '__version__',

    # Expressions
    'ExprFunction',
    'CriticalKind',
    'StationaryType',
    'CriticalPoint',
    'parse',
    'eval_jet',
    'find_critical_points',
    'classify_oscillator',

    # Special functions
    'SpecFunResult',
    'gamma',
    'bessel_j',
    'lommel_s',
    'bessel_zeros',
    'bessel_zero',
    'airy_ai_neg',

    # Jets
    'Jet',

    # Sigma
    'SigmaVariant',
    'SigmaSequence',
    'sigma_plain',
    'sigma_tilde',
    'sigma_hat',

    # Moments
    'Provenance',
    'MomentTable',
    'moment_power',
    'modified_moments',
    'modified_moments_stationary',
    'generalized_moment',
    'generalized_moments',

    # Methods
    'TransformSpec',
    'Basis',
    'Position',
    'FilonPlan',
    'FilonInterpolant',
    'asymptotic_plain',
    'asymptotic_zero',
    'asymptotic_stationary',
    'asymptotic_remainder',
    'filon',
    'filon_coeffs',
    'expected_rate',
    'filon_order',

    # Reference integrator
    'OracleResult',
    'integrate_oscillatory',
    'reference_hankel',

    # Applications
    'FourierBesselSeries',
    'airy_transform',
    'fourier_bessel_coeffs',

    # Sweeps
    'SlopeFit',
    'SweepReport',
    'geometric_grid',
    'fit_slope',
    'run_sweep',

    # Settings
    'Settings',
    'get_settings',
    'load_settings',
    'configure_logging',

    # Exceptions
    'HankelError',
    'DomainError',
    'UnreachableAccuracyError',
    'JetError',
    'SingularDivisionError',
    'NonRemovableSingularityError',
    'ExprError',
    'ExprSyntaxError',
    'ExprEvaluationError',
    'ClassificationError',
    'SubdivideRequiredError',
    'WrongMethodError',
    'UnsupportedCaseError',
    'PlanError',
    'ConditioningError',
    'OracleCostError',
    'ToleranceError',
]
