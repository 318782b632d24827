import cmath
import math

import numpy as np
import pytest

from lerchnil import constants as K
from lerchnil.characters import divisors, enumerate_characters, primitive_core, principal_character, restrict
from lerchnil.functional_eq import (adjoint_hecke_eigen_residual, clean_points, coarse_decomposition,
                                   decomposition_gram, fe_residual, fe_sides, hecke_eigen_residual,
                                   intertwine_residual, lerch_nil, r_permutes_coarse_blocks)
from lerchnil.gamma import gamma_pm
from lerchnil.lerch import lerch_pm
from lerchnil.linefunctions import gaussian, hermite1

CHI1 = principal_character(1)


def primitive(e, i=0):
    return [c for c in enumerate_characters(e) if c.is_primitive][i]


def test_decomposition_examples():
    idx = coarse_decomposition(6)
    members = sorted(len(b.members) for b in idx.blocks)
    assert members == [2, 4]
    assert idx.size() == 6
    blocks4 = {(b.conductor, b.members) for b in coarse_decomposition(4).blocks}
    assert blocks4 == {(1, (1, 2, 4)), (4, (4,))}


@pytest.mark.parametrize("N", range(1, 25))
def test_block_sizes_sum_to_level(N):
    idx = coarse_decomposition(N)
    assert idx.size() == N == coarse_decomposition(-N).size()
    for i in range(len(idx.blocks)):
        assert idx.blocks[idx.conjugate_block(i)].core == idx.blocks[i].core.conj()


def test_gram_and_leak_level_six():
    labels, G = decomposition_gram(6)
    assert len(labels) == 6
    assert np.max(np.abs(G - np.eye(6))) < 1e-6
    assert r_permutes_coarse_blocks(6)["max_leak"] < 1e-5


CASES = [(1, 1, CHI1), (5, 5, primitive(5, 1)), (5, 5, primitive(5, 0)), (6, 6, primitive(3)),
         (6, 3, primitive(3)), (6, 2, principal_character(1)), (-5, 5, primitive(5, 1)), (12, 4, primitive(4))]


@pytest.mark.parametrize("N,d,chi", CASES)
def test_intertwining(N, d, chi):
    for f in (gaussian(1.0), hermite1(1.0)):
        assert intertwine_residual(N, d, chi, f) < 1e-6


@pytest.mark.parametrize("N,d,chi", CASES)
@pytest.mark.parametrize("sign", [1, -1])
def test_functional_equation(N, d, chi, sign):
    for s in (0.4 + 0.9j, 0.5 + 1.3j):
        assert fe_residual(sign, N, d, chi, s) < 1e-6


def test_printed_coefficients_agree_for_even_characters():
    chi = next(c for c in enumerate_characters(5) if c.is_primitive and c.parity == 1)
    assert abs(fe_residual(1, 5, 5, chi, 0.5 + 1.3j, form="printed")) < 1e-6
    odd = next(c for c in enumerate_characters(5) if c.parity == -1)
    assert fe_residual(1, 5, 5, odd, 0.5 + 1.3j, form="printed") > 1e-2


@pytest.mark.parametrize("sign", [1, -1])
def test_double_application_at_level_one(sign):
    s, a, c = 0.3 + 0.8j, 0.21, 0.37
    lhs1, rhs1 = fe_sides(sign, 1, 1, CHI1, s, [(a, c)])
    lhs2, rhs2 = fe_sides(sign, 1, 1, CHI1, 1 - s, [(-c, a)])
    assert abs(lhs1[0] - rhs1[0]) < 1e-9 and abs(lhs2[0] - rhs2[0]) < 1e-9
    # two steps bring (a, c) to (-a, -c); gamma(s) gamma(1-s) = sign matches the parity of L
    prod = gamma_pm(sign, s) * gamma_pm(sign, 1 - s)
    assert abs(prod - sign) < 1e-12
    twice = lhs2[0] * cmath.exp(-2j * math.pi * a * c)
    assert abs(twice - prod * lerch_pm(sign, s, a, c).value) < 1e-9
    assert abs(lerch_pm(sign, s, -a, -c).value - twice) < 1e-9


HECKE = [(1, 1, CHI1), (5, 5, primitive(5, 1)), (6, 3, restrict(primitive(3), 3)),
         (6, 6, restrict(primitive(3), 6))]


@pytest.mark.parametrize("N,d,chi", HECKE)
def test_hecke_eigenrelation(N, d, chi):
    ms = [m for m in (2, 3, 5, 7) if math.gcd(m, N) == 1]
    for s in (0.5, 0.5 + 1.3j):
        for sign in (1, -1):
            assert hecke_eigen_residual(sign, N, d, chi, s, ms) < 1e-8


def test_adjoint_eigenvalue_exponent():
    chi = primitive(5, 1)
    out = adjoint_hecke_eigen_residual(1, 5, 5, chi, 0.5 + 1.3j)
    assert out["reciprocal"] < 1e-8 and out["composition"] < 1e-8
    assert out["printed"] > 1e-2
    assert out["holds"] == "reciprocal"


def test_trivial_hecke_index():
    assert hecke_eigen_residual(1, 5, 5, primitive(5, 1), 0.5 + 1j, ms=(1,)) < 1e-14


def test_rejections():
    with pytest.raises(ValueError):
        hecke_eigen_residual(1, 6, 3, restrict(primitive(3), 3), 0.5, ms=(2,))
    with pytest.raises(ValueError):
        fe_residual(1, 6, 3, restrict(primitive(3), 6), 0.5)
    with pytest.raises(ValueError):
        fe_residual(1, 6, 4, CHI1, 0.5)
    with pytest.raises(ValueError):
        intertwine_residual(5, 5, primitive(5, 1), form="typeset")
    with pytest.raises(ValueError):
        coarse_decomposition(0)


def test_clean_points_keeps_regular_points():
    pts = ((0.31, 0.17), (0.62, 0.44))
    assert clean_points(pts, 5, [5]) == pts
    moved = clean_points(((0.4, 0.7),), 5, [5])
    a, c = moved[0]
    assert (a, c) != (0.4, 0.7)
    assert min(abs(5 * a - round(5 * a)), abs(5 * c - round(5 * c))) >= K.NUDGE_MARGIN


def test_lerch_nil_is_in_level_space():
    for N, d, chi in HECKE:
        L = lerch_nil(-1, N, d, chi, 0.5 + 1.3j)
        a, c = np.array([0.137, 0.61]), np.array([0.283, 0.09])
        v = L.base_eval(a, c)
        assert np.max(np.abs(L.base_eval(a + 1, c) - v)) < 1e-10
        assert np.max(np.abs(L.base_eval(a, c + 1) - np.exp(-2j * math.pi * N * a) * v)) < 1e-10
