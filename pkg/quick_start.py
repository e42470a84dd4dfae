from finite_hankel import (
    TransformSpec, FilonPlan, parse, asymptotic_plain, filon, reference_hankel
)

# int_1^2 cos(x) J_1(100 (x^2 + x)) dx
spec = TransformSpec(parse('cos(x)'), parse('x^2+x'), 1.0, 2.0, nu=1.0, omega=100.0)

# 점근 전개 (m = 2)
print(f"asymptotic: {asymptotic_plain(spec, 2):.15g}")

# Filon (노드 1, 4/3, 5/3, 2, 중복도 2)
plan = FilonPlan((1.0, 4 / 3, 5 / 3, 2.0), (2, 2, 2, 2))
print(f"filon:      {filon(spec, plan):.15g}")

# 기준 적분
result = reference_hankel(spec)
print(f"oracle:     {result.value:.15g} (+/- {result.est_abs_error:.1e})")
