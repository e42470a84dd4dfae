"""
Finite Hankel Transform Library - Tests
"""
