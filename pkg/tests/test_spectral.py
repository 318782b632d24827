import math

import mpmath
import numpy as np
import pytest

from lerchnil.characters import enumerate_characters, principal_character
from lerchnil.functional_eq import lerch_nil
from lerchnil.lerch import SingularLineError
from lerchnil.linefunctions import bump, gaussian, hermite1, line_dilate
from lerchnil.spectral import (SpectralSample, delta_L_apply, delta_L_convergence_ratio, delta_L_eigen_residual,
                               mellin, mellin_eval, multiplier_table, parseval_check, sample_spectrum,
                               spectral_synthesis, tau_grid, theta_mellin_check)
from lerchnil.weil_brezin import wb_map


def gamma_oracle(s, k, t=1.0):
    # int_R e^{-pi t x^2} x^k sgn(x)^k |x|^{s-1} dx
    w = (s + k) / 2
    return complex(mpmath.gamma(w) * (mpmath.pi * t) ** (-w))


@pytest.mark.parametrize("s", [0.5, 0.5 + 2j, 1.7 - 3j, 0.2 + 11j])
def test_mellin_of_gaussians(s):
    assert abs(mellin(gaussian(1.0), 0, s) - gamma_oracle(s, 0)) < 1e-10
    assert abs(mellin(gaussian(2.5), 0, s) - gamma_oracle(s, 0, 2.5)) < 1e-10
    assert abs(mellin(hermite1(1.0), 1, s) - gamma_oracle(s, 1)) < 1e-10


def test_mellin_parity_and_divergence():
    assert abs(mellin(gaussian(1.0), 1, 0.5 + 1j)) < 1e-14
    assert abs(mellin(hermite1(1.0), 0, 0.5 + 1j)) < 1e-14
    r = mellin_eval(gaussian(1.0), 0, -0.3)
    assert r.pole_flag
    with pytest.raises(ValueError):
        mellin(gaussian(1.0), 0, -0.3)
    # the odd part of a Gaussian vanishes at 0, so Re s > -1 suffices there
    assert abs(mellin(hermite1(1.0), 1, -0.5 + 1j) - gamma_oracle(-0.5 + 1j, 1)) < 1e-9
    with pytest.raises(ValueError):
        mellin(gaussian(1.0), 2, 0.5)


def test_mellin_of_compact_bump_against_quadrature():
    f = bump(1.0)
    s = 0.5 + 1.5j
    want = complex(2 * mpmath.quad(lambda x: complex(f(np.array([float(x)]))[0]) * x ** (s - 1), [0, 0.5, 1]))
    assert abs(mellin(f, 0, s) - want) < 1e-8


def test_dilation_multiplies_mellin():
    f, t, s = gaussian(1.0), 1.9, 0.5 + 0.8j
    for k, g in ((0, f), (1, hermite1(1.0))):
        assert abs(mellin(line_dilate(g, t), k, s) - t ** (0.5 - s) * mellin(g, k, s)) < 1e-10


def test_d_multiplier_on_critical_line():
    taus = np.linspace(-5, 5, 20)
    for f in (gaussian(1.0), hermite1(1.3), bump(1.0)):
        assert max(r[2] for r in multiplier_table(f, taus)) < 1e-6


def test_synthesis_round_trip():
    for f in (gaussian(1.0), hermite1(1.0)):
        S = sample_spectrum(f)
        x = np.array([0.7, -0.3, 1.4, -2.1])
        assert np.max(np.abs(spectral_synthesis(S, x) - f(x))) < 1e-4
        assert np.max(np.abs(spectral_synthesis(S, x, "2sqrt2pi") - f(x))) > 1e-2


def test_parseval_measure():
    out = parseval_check(gaussian(1.0))
    assert abs(out["4pi"] - out["norm2"]) < 1e-6
    assert abs(out["2sqrt2pi"] / out["norm2"] - math.sqrt(2)) < 1e-6


def test_spectral_sample_bookkeeping():
    S = SpectralSample(((1, 0.5, 1j), (0, 0.5, 2.0), (0, -0.5, 3.0)))
    taus, vals = S.slice(0)
    assert list(taus) == [-0.5, 0.5] and list(vals) == [3.0, 2.0]
    assert S.to_csv().splitlines()[0] == "k,tau,re,im"
    with pytest.raises(ValueError):
        SpectralSample((), "sqrt2")
    assert len(tau_grid(1.0, 0.25)) == 9


@pytest.mark.parametrize("N,d,idx", [(1, 1, 0), (3, 3, 1), (-2, 2, 0)])
def test_delta_l_exact_matches_finite_differences(N, d, idx):
    F = wb_map(gaussian(1.0) + hermite1(0.8), N, d, enumerate_characters(d)[idx])
    pts = [(0.31, 0.17), (0.62, 0.44), (-0.2, 0.9)]
    a, c = (np.array(v) for v in zip(*pts))
    exact = delta_L_apply(F, "exact").base_eval(a, c)
    fd1 = delta_L_apply(F, "fd", 1e-3).base_eval(a, c)
    fd2 = delta_L_apply(F, "fd", 5e-4).base_eval(a, c)
    assert np.max(np.abs(exact - (4 * fd2 - fd1) / 3)) < 1e-7
    assert abs(delta_L_convergence_ratio(F, pts) - 4.0) < 0.1


def test_delta_l_eigenvalue_scales_with_level():
    grid = [(a, c) for a in (0.3, 0.5, 0.7) for c in (0.3, 0.5, 0.7)]
    chi = [c for c in enumerate_characters(5) if c.is_primitive][1]
    for N, d, ch in [(1, 1, principal_character(1)), (5, 5, chi)]:
        for sign in (1, -1):
            s = 0.5 + 1.3j
            L = lerch_nil(sign, N, d, ch, s)
            lam = -N * (s - 0.5)
            assert delta_L_eigen_residual(L, lam, grid, richardson=True) < 1e-6
            if N > 1:
                assert delta_L_eigen_residual(L, -(s - 0.5), grid, richardson=True) > 1.0


def test_delta_l_refuses_singular_stencils():
    L = lerch_nil(1, 1, 1, principal_character(1), 0.5 + 1j)
    with pytest.raises(SingularLineError):
        delta_L_apply(L, "fd").base_eval(0.3, 1e-4)
    with pytest.raises(ValueError):
        delta_L_apply(L, "spline")
    with pytest.raises(NotImplementedError):
        delta_L_apply(L, "exact")


def test_theta_integral_is_full_product():
    out = theta_mellin_check(gaussian(1.0), 0, 2.0, 0.3, 0.7)
    assert abs(out["integral"] - out["full"]) < 1e-8
    assert abs(out["integral_with_sqrt"] - out["shifted"]) < 1e-8
    out = theta_mellin_check(hermite1(1.0), 1, 1.5 + 0.5j, 0.3, 0.7)
    assert abs(out["integral"] - out["full"]) < 1e-8


def test_plain_stencil_error_at_level_five_is_second_order():
    # the plain h = 1e-3 stencil misses 1e-4 at N = 5; halving h cuts the error by 4
    grid = [(a, c) for a in (0.3, 0.5, 0.7) for c in (0.3, 0.5, 0.7)]
    chi = [c for c in enumerate_characters(5) if c.is_primitive][1]
    s = 0.5 + 1.3j
    L = lerch_nil(1, 5, 5, chi, s)
    lam = -5 * (s - 0.5)
    coarse = delta_L_eigen_residual(L, lam, grid, h=1e-3)
    fine = delta_L_eigen_residual(L, lam, grid, h=5e-4)
    assert coarse > 1e-4
    assert abs(coarse / fine - 4.0) < 0.05
