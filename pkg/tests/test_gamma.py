import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from lerchnil.gamma import PoleError, complex_gamma, gamma_pm, log_gamma


@given(st.floats(-8.0, 12.0), st.floats(-40.0, 40.0))
@settings(max_examples=80, deadline=None)
def test_gamma_matches_mpmath(x, y):
    s = complex(x, y)
    if abs(y) < 1e-3 and abs(x - round(x)) < 1e-3 and x < 0.5:
        return
    want = complex(mpmath.gamma(s))
    assert abs(complex_gamma(s) - want) <= 1e-12 * abs(want) + 1e-300


def test_log_gamma_consistency():
    for s in (0.5 + 14.134725j, 3.3 - 2j, -2.7 + 0.1j):
        assert abs(cmath.exp(log_gamma(s)) / complex_gamma(s) - 1) < 1e-12


def test_gamma_on_critical_line_modulus():
    s = 0.5 + 14.134725j
    want = abs(complex(mpmath.gamma(s)))
    assert abs(abs(complex_gamma(s)) / want - 1) < 1e-12
    # Stirling: |Gamma(1/2 + it)| = sqrt(pi / cosh(pi t))
    assert abs(abs(complex_gamma(s)) / math.sqrt(math.pi / math.cosh(math.pi * s.imag)) - 1) < 1e-12


def test_poles():
    for n in (0, -1, -7):
        with pytest.raises(PoleError):
            complex_gamma(n)


@pytest.mark.parametrize("sign,s,prod", [(1, 0.3 + 0.9j, 1), (-1, 0.7 - 0.4j, -1), (1, 2.5 + 3j, 1),
                                          (-1, -0.2 + 5j, -1)])
def test_gamma_pm_reflection(sign, s, prod):
    assert abs(gamma_pm(sign, s) * gamma_pm(sign, 1 - s) - prod) < 1e-12


def oracle_gamma_pm(sign, s):
    k = 0 if sign > 0 else 1
    loc = lambda w: mpmath.pi ** (-(w + k) / 2) * mpmath.gamma((w + k) / 2)
    v = complex(loc(s) / loc(1 - s))
    return v if k == 0 else -1j * v


@pytest.mark.parametrize("s", [0.25 + 1j, 0.5 + 7j, 1.5 - 2j])
def test_gamma_pm_against_mpmath(s):
    for sign in (1, -1):
        assert abs(gamma_pm(sign, s) - oracle_gamma_pm(sign, s)) < 1e-12 * abs(oracle_gamma_pm(sign, s))


def test_gamma_pm_pole():
    with pytest.raises(PoleError):
        gamma_pm(1, 0)
