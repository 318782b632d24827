import math
from dataclasses import replace

import mpmath
import numpy as np
import pytest

from lerchnil.characters import enumerate_characters, principal_character
from lerchnil.linefunctions import (fourier, fourier_transform, gaussian, hermite1, l2_inner, line_dilate,
                                    schrodinger_act, zero_function)
from lerchnil.nilmanifold import QuadratureSpec, hecke, inner_product, j_op, r_op, random_points, sup_residual
from lerchnil.weil_brezin import (additive_brezin, additive_expansion, dilation_on_nil, wb_hecke_expansion,
                                  wb_inverse, wb_map)

PTS = random_points(40, seed=11)


@pytest.mark.parametrize("t", [1.0, 2.0, 0.6])
def test_gaussian_image_is_theta(t):
    # W f (a, c) = e^{-pi t c^2} theta_3(pi (a + i c t), e^{-pi t}) in mpmath's nome convention
    F = wb_map(gaussian(t), 1)
    for a, c in [(0.1, 0.2), (0.7, -0.4), (0.33, 0.9)]:
        want = complex(mpmath.exp(-math.pi * t * c * c) * mpmath.jtheta(3, math.pi * (a + 1j * c * t),
                                                                        mpmath.exp(-math.pi * t)))
        assert abs(complex(F(a, c)) - want) < 1e-13


@pytest.mark.parametrize("N,d", [(1, 1), (6, 2), (6, 3), (6, 6), (-4, 2)])
def test_isometry(N, d):
    f, g = gaussian(1.0), gaussian(2.0)
    want = l2_inner(f, g)
    for chi in enumerate_characters(d):
        got = inner_product(wb_map(f, N, d, chi), wb_map(g, N, d, chi))
        assert abs(got - want) < 1e-6


def test_distinct_components_are_orthogonal():
    f = gaussian(1.0)
    chis = enumerate_characters(3)
    assert abs(inner_product(wb_map(f, 6, 3, chis[0]), wb_map(f, 6, 3, chis[1]))) < 1e-12
    assert abs(inner_product(wb_map(f, 6, 3, chis[1]), wb_map(f, 6, 6, enumerate_characters(6)[1]))) < 1e-12


def test_rescaling_to_level_d():
    # W_{6,3}(chi) f (a, c) = W_{3,3}(chi)(U(2) f)(2 a, c)
    a, c = PTS
    for chi in enumerate_characters(3):
        F = wb_map(gaussian(1.0), 6, 3, chi)
        G = wb_map(line_dilate(gaussian(1.0), 2.0), 3, 3, chi)
        assert np.max(np.abs(F.base_eval(a, c) - G.base_eval(2 * a, c))) < 1e-12


def test_inverse_round_trip():
    f = gaussian(1.0)
    F = wb_map(f, 1)
    x = np.array([-1.3, 0.25, 2.7])
    assert wb_inverse(F) is f
    plain = F * 1.0  # drops the backing, so the quadrature path is used
    assert np.max(np.abs(wb_inverse(plain)(x) - f(x))) < 1e-6
    G = wb_map(gaussian(1.0), 1) + wb_map(hermite1(1.0), 1) * 2.0
    assert np.max(np.abs(wb_inverse(G)(x) - (f(x) + 2 * hermite1(1.0)(x)))) < 1e-6
    assert np.max(np.abs(wb_inverse(wb_map(zero_function(), 1) * 1.0)(x))) == 0


def test_inverse_needs_backing_off_level_one():
    with pytest.raises(NotImplementedError):
        wb_inverse(wb_map(gaussian(), 2) * 1.0)


def test_schrodinger_intertwining():
    f, h = gaussian(1.0), (0.3, 0.1, 0.2)
    from lerchnil.nilmanifold import heisenberg_act
    assert sup_residual(wb_map(schrodinger_act(f, 2, h), 2), heisenberg_act(wb_map(f, 2), h), PTS) < 1e-12


def test_fourier_conventions():
    y = np.array([-0.8, 0.0, 0.45, 1.9])
    f = gaussian(1.0)
    assert np.max(np.abs(fourier_transform(f, y) - np.exp(-math.pi * y * y))) < 1e-14
    assert np.max(np.abs(fourier_transform(f, y, "printed") - np.exp(-math.pi * y * y) / math.sqrt(2 * math.pi))) < 1e-14
    g = hermite1(1.0)
    vals = fourier_transform(g, y)
    assert np.max(np.abs(vals + fourier_transform(g, -y))) < 1e-14
    # closed form against the numeric transform
    bare = replace(g, ft=None)
    assert np.max(np.abs(fourier_transform(bare, y) - vals)) < 1e-10


def test_weil_intertwining_level_one():
    for f in (gaussian(1.0), gaussian(2.3), hermite1(0.7)):
        assert sup_residual(r_op(wb_map(f, 1)), wb_map(fourier(f), 1), PTS) < 1e-12


def test_dilation_laws():
    f = gaussian(1.0)
    x = np.linspace(-2, 2, 9)
    assert np.max(np.abs(line_dilate(f, 1.0)(x) - f(x))) == 0
    assert np.max(np.abs(line_dilate(line_dilate(f, 1.5), 2.0)(x) - line_dilate(f, 3.0)(x))) < 1e-15
    assert abs(l2_inner(line_dilate(f, 3.0), line_dilate(f, 3.0)) - l2_inner(f, f)) < 1e-10


@pytest.mark.parametrize("N,d", [(5, 5), (3, 3), (4, 4)])
def test_reflection_is_parity_times_j(N, d):
    for chi in enumerate_characters(d):
        F = wb_map(gaussian(1.0) + hermite1(1.0), N, d, chi)
        assert sup_residual(dilation_on_nil(F, -1.0), j_op(F) * chi(-1), PTS) < 1e-12


def test_v_commutes_with_hecke():
    chi = [c for c in enumerate_characters(5) if c.is_primitive][0]
    f = gaussian(1.0)
    F = wb_map(f, 5, 5, chi)
    lhs = hecke(dilation_on_nil(F, 1.7), 2)
    rhs = wb_hecke_expansion(line_dilate(f, 1.7), 5, 5, chi, 2)
    assert sup_residual(lhs, rhs, PTS) < 1e-9
    assert sup_residual(hecke(F, 2), wb_hecke_expansion(f, 5, 5, chi, 2), PTS) < 1e-12


def test_hecke_expansion_multi_term():
    f = gaussian(1.0)
    E = wb_hecke_expansion(f, 4, 1, principal_character(1), 2)
    assert sup_residual(hecke(wb_map(f, 4, 1), 2), E, PTS) < 1e-12


def test_additive_level_one_is_classical():
    f = gaussian(1.0)
    assert sup_residual(additive_brezin(f, 1, 0), wb_map(f, 1), PTS) < 1e-15


def test_additive_rescaling_and_character_relation():
    f = gaussian(1.0)
    a, c = PTS
    W = wb_map(f, 1)
    for N, k in [(3, 1), (4, 1), (5, 3)]:
        A = additive_brezin(f, N, k)
        assert np.max(np.abs(A.base_eval(a, c) - W.base_eval(a + k / N, N * c))) < 1e-12
        for j in range(N):
            lt = np.exp(2j * math.pi * j * a) * A.base_eval(a, c + j / N)
            assert np.max(np.abs(lt - np.exp(-2j * math.pi * k * j / N) * A.base_eval(a, c))) < 1e-12


def test_additive_expansion_reproduces_function():
    for N, d in [(5, 5), (6, 3), (4, 2)]:
        for chi in enumerate_characters(d):
            F = wb_map(hermite1(1.0), N, d, chi)
            assert sup_residual(F, additive_expansion(F), PTS) < 1e-12


def test_argument_validation():
    with pytest.raises(ValueError):
        wb_map(gaussian(), 6, 4)
    with pytest.raises(ValueError):
        wb_map(gaussian(), 6, 3, principal_character(6))
    with pytest.raises(ValueError):
        additive_brezin(gaussian(), 3, 3)
    with pytest.raises(ValueError):
        line_dilate(gaussian(), 0)
