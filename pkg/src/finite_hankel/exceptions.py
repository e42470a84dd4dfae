"""
Finite Hankel Custom Exceptions
"""

from typing import Optional, Sequence


class HankelError(Exception):
    """유한 Hankel 변환 라이브러리 기본 예외"""
    pass


class DomainError(HankelError):
    """입력이 정의역을 벗어남 (감마 함수 극점, 차수 범위, 모멘트 존재 조건)"""
    pass


class UnreachableAccuracyError(HankelError):
    """발산 급수로 요구 정확도를 달성할 수 없음"""

    def __init__(self, message: str, best_bound: float):
        super().__init__(message)
        self.best_bound = best_bound


class JetError(HankelError):
    """Jet(절단 테일러 급수) 연산 오류"""
    pass


class SingularDivisionError(JetError):
    """분모 jet의 상수항이 0"""
    pass


class NonRemovableSingularityError(JetError):
    """선행 계수가 수치적으로 0이 아님 (제거 불가능한 특이점)"""
    pass


class ExprError(HankelError):
    """수식 처리 오류"""
    pass


class ExprSyntaxError(ExprError):
    """수식 구문 오류 또는 알 수 없는 식별자"""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (column {position})"
        super().__init__(message)
        self.position = position


class ExprEvaluationError(ExprError):
    """수식 평가 중 정의역 위반 (음수의 log 등)"""
    pass


class ClassificationError(HankelError):
    """진동자 임계점 분류 오류"""
    pass


class SubdivideRequiredError(ClassificationError):
    """구간에 임계점이 둘 이상 존재함"""

    def __init__(self, message: str, points: Sequence = ()):
        super().__init__(message)
        self.points = list(points)


class WrongMethodError(ClassificationError):
    """임계점 유형과 맞지 않는 방법 선택"""
    pass


class UnsupportedCaseError(HankelError):
    """지원하지 않는 경우 (Type I 정류점, 내부 정류점 Filon 등)"""
    pass


class PlanError(HankelError):
    """Filon 노드/중복도 계획 오류"""
    pass


class ConditioningError(HankelError):
    """보간 연립방정식의 조건수가 너무 큼"""

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


class OracleCostError(HankelError):
    """기준 적분기 비용 한계 초과"""
    pass


class ToleranceError(HankelError):
    """허용오차를 정밀도 한계 내에서 달성할 수 없음"""
    pass
