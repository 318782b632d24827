"""Verification suites shared by the CLI and the test-suite.

Each suite returns a list of report rows
{identity, parameters, residual, tolerance, pass}; a row may carry an extra
"note".  Rows are plain JSON-ready dicts in a fixed order.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import constants as K
from .characters import DirichletCharacter, divisors, enumerate_characters, principal_character, restrict
from .functional_eq import (adjoint_hecke_eigen_residual, coarse_decomposition, decomposition_gram, fe_residual,
                            hecke_eigen_residual, intertwine_residual, lerch_nil, r_permutes_coarse_blocks)
from .gamma import complex_gamma
from .linefunctions import gaussian, hecke_line, hermite1, l2_inner, line_dilate
from .nilmanifold import (QuadratureSpec, hecke, hecke_adjoint, hecke_heisenberg_commutation_check, inner_product,
                          norm, r_op, random_points, sup_residual)
from .spectral import (delta_L_convergence_ratio, delta_L_eigen_residual, mellin, multiplier_table, parseval_check,
                       sample_spectrum, spectral_synthesis)
from .weil_brezin import additive_brezin, additive_expansion, dilation_on_nil, wb_hecke_expansion, wb_map

__all__ = ["SUITES", "run_suite", "row", "all_pass", "primitive_characters", "default_character"]


def row(identity: str, params: dict, residual: float, tol: float, note: str | None = None,
        upper: bool = True, informational: bool = False) -> dict:
    """``upper`` means the residual must stay below tol; otherwise above it.

    Informational rows document a competing convention; they never decide the exit status.
    """
    ok = bool(residual < tol) if upper else bool(residual > tol)
    out = {"identity": identity, "parameters": params, "residual": float(residual), "tolerance": tol, "pass": ok}
    if informational:
        out["informational"] = True
    if note:
        out["note"] = note
    return out


def all_pass(rows: List[dict]) -> bool:
    return all(r["pass"] for r in rows if not r.get("informational"))


def primitive_characters(e: int) -> List[DirichletCharacter]:
    return [c for c in enumerate_characters(e) if c.is_primitive]


def default_character(N: int) -> tuple:
    """(d, chi*) used when a suite is asked for level N without a character.

    The primitive core is the first non-real primitive character of the
    largest conductor available, falling back to the principal one.
    """
    n = abs(N)
    for e in sorted((e for e in range(2, n + 1) if n % e == 0), reverse=True):
        prims = primitive_characters(e)
        if prims:
            cplx = [c for c in prims if c.conj() != c]
            return n, (cplx or prims)[0]
    return 1, principal_character(1)


def _resolve_core(N: int, d, chi):
    if chi is not None:
        return (chi.modulus if d is None else d), chi
    if d is None:
        return default_character(N)
    return d, principal_character(1)


def _s_label(s: complex) -> str:
    return f"{complex(s).real:g}{complex(s).imag:+g}i"


# -- suites -----------------------------------------------------------------

def suite_fe(N: int = 1, d: Optional[int] = None, chi: Optional[DirichletCharacter] = None,
             s_list: Sequence[complex] = (0.4 + 0.9j, 0.5 + 1.3j), form: str = "derived",
             tol: float = K.FE_TOL, **_) -> List[dict]:
    d, chi = _resolve_core(N, d, chi)
    rows = []
    for s in s_list:
        for sign in (1, -1):
            r = fe_residual(sign, N, d, chi, s, form=form)
            rows.append(row("functional_equation", {"sign": sign, "N": N, "d": d, "chi": chi.to_json(),
                                                     "s": _s_label(s), "form": form}, r, tol))
    return rows


def suite_hecke(N: int = 1, d: Optional[int] = None, chi: Optional[DirichletCharacter] = None,
                s_list: Sequence[complex] = (0.5, 0.5 + 1.3j), ms: Sequence[int] = (2, 3, 5, 7),
                m: Optional[int] = None, tol: float = K.HECKE_TOL, **_) -> List[dict]:
    if m is not None:
        ms = (m,)
    d, chi = _resolve_core(N, d, chi)
    if chi.modulus != d:
        chi = restrict(chi, d)
    ms = [m for m in ms if math.gcd(m, abs(N)) == 1]
    rows = []
    for s in s_list:
        for sign in (1, -1):
            params = {"sign": sign, "N": N, "d": d, "chi": chi.to_json(), "s": _s_label(s), "m": ms}
            rows.append(row("hecke_eigen", params, hecke_eigen_residual(sign, N, d, chi, s, ms), tol))
            adj = adjoint_hecke_eigen_residual(sign, N, d, chi, s, ms[:2])
            rows.append(row("adjoint_hecke_eigen_reciprocal", params, adj["reciprocal"], tol))
            rows.append(row("adjoint_hecke_eigen_printed_exponent", params, adj["printed"], tol,
                            note="eigenvalue conj(chi(m)) m^(1-s)", informational=True))
            rows.append(row("adjoint_composition", params, adj["composition"], tol))
    return rows


def suite_intertwine(N: int = 1, d: Optional[int] = None, chi: Optional[DirichletCharacter] = None,
                     form: str = "derived", tol: float = K.INTERTWINE_TOL, **_) -> List[dict]:
    d, chi = _resolve_core(N, d, chi)
    rows = []
    for f in (gaussian(1.0), hermite1(1.0)):
        r = intertwine_residual(N, d, chi, f, form=form)
        rows.append(row("R_intertwining", {"N": N, "d": d, "chi": chi.to_json(), "f": f.label, "form": form},
                        r, tol))
    return rows


def _test_function(N: int):
    parts = []
    for i, d in enumerate(divisors(abs(N))):
        for j, chi in enumerate(enumerate_characters(d)):
            parts.append(wb_map(gaussian(1.0 + 0.3 * i + 0.1 * j), N, d, chi) * complex(1 + 0.2 * i, 0.1 * j))
    F = parts[0]
    for P in parts[1:]:
        F = F + P
    return F


def suite_operators(N: int = 4, m: int = 2, tol: float = K.OPERATOR_TOL, seed: int = K.SEED,
                    **_) -> List[dict]:
    pts = random_points(64, seed)
    a, c = pts
    F = _test_function(N)
    p = {"N": N, "m": m}
    rows = []
    r = sup_residual(hecke(hecke(F, 2), 3), hecke(F, 6), pts)
    r = max(r, sup_residual(hecke(hecke(F, 3), 2), hecke(F, 6), pts))
    rows.append(row("T2T3_eq_T6", p, r, K.EXACT_TOL))
    rows.append(row("R4_eq_I", p, sup_residual(r_op(r_op(r_op(r_op(F)))), F, pts), K.EXACT_TOL))
    dd = math.gcd(m, abs(N))
    lhs = hecke_adjoint(hecke(F, m), m).base_eval(a, c)
    rhs = sum(F.base_eval(a + l / dd, c) for l in range(dd)) / m
    rows.append(row("TstarT_multiterm", p, float(np.max(np.abs(lhs - rhs))), tol))
    lhs = hecke(hecke_adjoint(F, m), m).base_eval(a, c)
    rhs = sum(np.exp(2j * math.pi * N * l / dd * a) * F.base_eval(a, c + l / dd) for l in range(dd)) / m
    rows.append(row("TTstar_multiterm", p, float(np.max(np.abs(lhs - rhs))), tol))
    q = QuadratureSpec()
    gap = norm(hecke_adjoint(hecke(F, m), m) - hecke(hecke_adjoint(F, m), m), q) / norm(F, q)
    if dd > 1:
        rows.append(row("non_normality_witness", p, gap, 0.01, upper=False))
    else:
        rows.append(row("normality", p, gap, tol))
    R3TR = r_op(r_op(r_op(hecke(r_op(F), m))))
    rows.append(row("Tstar_eq_R3TR", p, sup_residual(hecke_adjoint(F, m), R3TR, pts), tol))
    rows.append(row("hecke_heisenberg", {**p, "h": [0.1, 0.2, 0.05]},
                    hecke_heisenberg_commutation_check(F, (0.1, 0.2, 0.05), m, pts), tol))
    # coprime case on level 5
    G = _test_function(5)
    half = 0.5
    r1 = sup_residual(hecke_adjoint(hecke(G, 2), 2), G * half, pts)
    r2 = sup_residual(hecke(hecke_adjoint(G, 2), 2), G * half, pts)
    rows.append(row("coprime_TstarT_eq_I_over_m", {"N": 5, "m": 2}, max(r1, r2), tol))
    return rows


def suite_decomposition(N: int = 6, tol: float = K.ISOMETRY_TOL, **_) -> List[dict]:
    idx = coarse_decomposition(N)
    rows = [row("block_count", {"N": N, "blocks": idx.to_json()["blocks"]}, abs(idx.size() - abs(N)), 0.5)]
    labels, G = decomposition_gram(N)
    off = float(np.max(np.abs(G - np.eye(len(G)))))
    rows.append(row("gram_offdiagonal", {"N": N, "size": len(G)}, off, tol))
    q = QuadratureSpec()
    worst = 0.0
    for d in divisors(abs(N)):
        for chi in enumerate_characters(d):
            f, g = gaussian(1.0), gaussian(2.0)
            got = inner_product(wb_map(f, N, d, chi), wb_map(g, N, d, chi), q)
            worst = max(worst, abs(got - l2_inner(f, g)))
    rows.append(row("wb_isometry", {"N": N}, worst, tol))
    leak = r_permutes_coarse_blocks(N)
    rows.append(row("R_block_leak", {"N": N}, leak["max_leak"], K.LEAK_TOL))
    return rows


def suite_additive(N: int = 5, ms: Sequence[int] = (2, 3), m: Optional[int] = None, tol: float = K.OPERATOR_TOL,
                   seed: int = K.SEED, **_) -> List[dict]:
    if m is not None:
        ms = (m,)
    pts = random_points(64, seed)
    a, c = pts
    f = gaussian(1.0)
    rows = []
    worst = 0.0
    for m in ms:
        for k in range(N):
            lhs = hecke(additive_brezin(f, N, k), m)
            rhs = additive_brezin(hecke_line(f, m), N, (k * m) % N)
            worst = max(worst, sup_residual(lhs, rhs, pts))
    rows.append(row("additive_hecke_permutation", {"N": N, "m": list(ms)}, worst, tol))
    W1 = wb_map(f, 1)
    worst = 0.0
    for k in range(N):
        A = additive_brezin(f, N, k)
        worst = max(worst, float(np.max(np.abs(A.base_eval(a, c) - W1.base_eval(a + k / N, N * c)))))
    rows.append(row("additive_rescaling", {"N": N}, worst, tol))
    worst = 0.0
    for k in range(N):
        A = additive_brezin(f, N, k)
        for j in range(N):
            lt = np.exp(2j * math.pi * j * a) * A.base_eval(a, c + j / N)
            worst = max(worst, float(np.max(np.abs(lt - np.exp(-2j * math.pi * k * j / N) * A.base_eval(a, c)))))
    rows.append(row("additive_character_relation", {"N": N}, worst, tol))
    d, chi = default_character(N)
    F = wb_map(f, N, d, restrict(chi, d))
    rows.append(row("additive_expansion", {"N": N, "d": d}, sup_residual(F, additive_expansion(F), pts), tol))
    rows.append(row("dilation_additive_vs_multiplicative", {"N": N, "t": 1.7},
                    sup_residual(dilation_on_nil(F, 1.7), dilation_on_nil(additive_expansion(F), 1.7), pts), tol))
    G = wb_map(f, N, d, restrict(chi, d))
    worst = 0.0
    for m in ms:
        worst = max(worst, sup_residual(hecke(dilation_on_nil(G, 1.7), m),
                                        wb_hecke_expansion(line_dilate(f, 1.7), N, d, restrict(chi, d), m), pts))
    rows.append(row("dilation_hecke_commutation", {"N": N, "m": list(ms), "t": 1.7}, worst, tol))
    E = wb_hecke_expansion(f, 4, 1, principal_character(1), 2)
    rows.append(row("hecke_multiterm_expansion", {"N": 4, "d": 1, "m": 2},
                    sup_residual(hecke(wb_map(f, 4, 1), 2), E, pts), tol))
    return rows


def suite_spectral(N: int = 1, tol: float = K.SPECTRAL_TOL, **_) -> List[dict]:
    rows = []
    taus = np.linspace(-5, 5, 20)
    worst = 0.0
    for f in (gaussian(1.0), hermite1(1.0), gaussian(2.0)):
        worst = max(worst, max(r[2] for r in multiplier_table(f, taus)))
    rows.append(row("D_multiplier", {"taus": 20}, worst, tol))
    s = 0.5
    g = mellin(gaussian(1.0), 0, s)
    oracle = math.pi ** (-s / 2) * complex_gamma(s / 2)
    s2 = 0.5 + 2j
    g2 = mellin(hermite1(1.0), 1, s2)
    oracle2 = math.pi ** (-(s2 + 1) / 2) * complex_gamma((s2 + 1) / 2)
    rows.append(row("mellin_gamma", {"s": [0.5, "0.5+2i"]}, max(abs(g - oracle), abs(g2 - oracle2)), 1e-8))
    S = sample_spectrum(gaussian(1.0))
    x = np.array([0.7, -0.3, 1.4])
    rows.append(row("synthesis_roundtrip", {"T": K.SYNTH_T, "h": K.SYNTH_H},
                    float(np.max(np.abs(spectral_synthesis(S, x) - np.exp(-math.pi * x * x)))), K.SYNTH_TOL))
    par = parseval_check(gaussian(1.0))
    for name in ("4pi", "2sqrt2pi"):
        rows.append(row(f"parseval_{name}", {"measure": name}, abs(par[name] - par["norm2"]), K.SYNTH_TOL,
                        informational=name != K.MELLIN_MEASURE))
    rows.extend(delta_rows(N))
    return rows


DELTA_GRID = tuple((a, c) for a in (0.3, 0.5, 0.7) for c in (0.3, 0.5, 0.7))


def delta_rows(N: int = 1) -> List[dict]:
    d, chi = default_character(N)
    rows = []
    for tau in (0.0, 1.3):
        s = 0.5 + 1j * tau
        for sign in (1, -1):
            L = lerch_nil(sign, N, d, chi, s)
            lam = -N * (s - 0.5)
            p = {"N": N, "d": d, "sign": sign, "tau": tau, "h": K.DELTA_H}
            rows.append(row("deltaL_eigen_fd", p, delta_L_eigen_residual(L, lam, DELTA_GRID), K.DELTA_TOL))
            rows.append(row("deltaL_eigen_richardson", p,
                            delta_L_eigen_residual(L, lam, DELTA_GRID, richardson=True), K.DELTA_TOL))
            ratio = delta_L_convergence_ratio(L, DELTA_GRID, eigenvalue=lam)
            rows.append(row("deltaL_convergence_ratio", p, abs(ratio - 4.0), 0.5, note=f"ratio={ratio:.4f}"))
    return rows


SUITES: Dict[str, Callable[..., List[dict]]] = {
    "fe": suite_fe,
    "hecke": suite_hecke,
    "intertwine": suite_intertwine,
    "operators": suite_operators,
    "decomposition": suite_decomposition,
    "spectral": suite_spectral,
    "additive": suite_additive,
}


def run_suite(name: str, **params) -> List[dict]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](**params)
