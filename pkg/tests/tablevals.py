"""Comparison helper for figures quoted from the worked-example tables.

Quoted values are print-rounded to 3-4 digits; a computed value matches
when it is within the stated absolute tolerance plus half an ulp of the
print rounding.
"""

import pytest

ABS_TOL = 2e-3


def tol(decimals: int) -> float:
    return ABS_TOL + 0.5 * 10.0 ** (-decimals)


def printed(value: float, decimals: int):
    """pytest.approx against a table figure printed with `decimals` decimals."""
    return pytest.approx(value, abs=tol(decimals))
