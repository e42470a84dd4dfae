"""
pytest 설정

- slow: 수렴 기울기 스윕 (pytest -m "not slow" 로 제외)
"""


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: convergence sweeps over omega in [1e2, 1e4]")
