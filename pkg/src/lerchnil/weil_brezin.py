"""Twisted and additive Weil-Brezin maps from line functions to H_N.

    W_{N,d}(chi) f (a, c) = sqrt(|N| / phi(d)) sum_n chi(n d / N) f(n + N c) e^{2 pi i n a}
    W_N(psi_k) f (a, c)   = sum_n e^{2 pi i k n / N} f(n + N c) e^{2 pi i n a}

chi(r) is 0 for non-integral r.  Sums are truncated to the window where the
decay descriptor of f exceeds tol / 10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import constants as K
from .characters import DirichletCharacter, char_value, divisors, principal_character, restrict, totient
from .linefunctions import Decay, LineFunction, hecke_line, line_dilate
from .nilmanifold import NilFunction

__all__ = [
    "WBBacking",
    "AdditiveBacking",
    "wb_map",
    "wb_inverse",
    "additive_brezin",
    "additive_expansion",
    "dilation_on_nil",
    "wb_hecke_expansion",
    "wb_constant",
]


@dataclass(frozen=True, eq=False)
class WBBacking:
    f: LineFunction
    N: int
    d: int
    chi: DirichletCharacter


@dataclass(frozen=True, eq=False)
class AdditiveBacking:
    """F = sum coef * W_N(psi_k) f_k."""
    N: int
    terms: Tuple[Tuple[complex, int, LineFunction], ...]


def wb_constant(N: int, d: int) -> float:
    return math.sqrt(abs(N) / totient(d))


def _zak_sum(f: LineFunction, N: int, weight, a, c, tol: float):
    """sum_n weight(n) f(n + N c) e^{2 pi i n a}, vectorized over (a, c)."""
    a, c = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(c, dtype=float))
    R = f.decay.radius(tol / 10)
    x0 = N * c
    n0 = np.floor(-x0 - R)
    width = int(math.ceil(2 * R)) + 2
    n = n0[..., None] + np.arange(width)
    w = weight(n)
    vals = f(n + x0[..., None])
    phase = np.exp(2j * math.pi * n * a[..., None])
    return np.sum(w * vals * phase, axis=-1)


def _char_weight(N: int, d: int, chi: DirichletCharacter):
    q = abs(N) // d
    sgn = 1 if N > 0 else -1
    table = np.asarray(chi.table, dtype=complex)

    def weight(n):
        ni = n.astype(np.int64)
        hit = (ni % q) == 0
        idx = (sgn * (ni // q)) % d
        return np.where(hit, table[idx], 0)

    return weight


def wb_map(f: LineFunction, N: int, d: int = 1, chi: DirichletCharacter | None = None,
           tol: float = K.WB_TOL) -> NilFunction:
    """Twisted Weil-Brezin map W_{N,d}(chi); d must divide |N|."""
    if N == 0:
        raise ValueError("N must be nonzero")
    if d <= 0 or abs(N) % d:
        raise ValueError("d must divide |N|")
    if chi is None:
        chi = principal_character(d)
    if chi.modulus != d:
        raise ValueError("character modulus must equal d")
    const = wb_constant(N, d)
    weight = _char_weight(N, d, chi)

    def base(a, c):
        return const * _zak_sum(f, N, weight, a, c, tol)

    label = f"W[{N},{d},{chi.index}]{f.label}"
    return NilFunction(int(N), base, WBBacking(f, int(N), d, chi), label)


def additive_brezin(f: LineFunction, N: int, k: int, tol: float = K.WB_TOL) -> NilFunction:
    """Additive Brezin map W_N(psi_k) with psi_k(n) = e^{2 pi i k n / N}."""
    if N <= 0:
        raise ValueError("additive maps need N >= 1")
    if not 0 <= k < N:
        raise ValueError(f"k must lie in [0, {N}), got {k}")

    def weight(n):
        return np.exp(2j * math.pi * k * (n % N) / N)

    def base(a, c):
        return _zak_sum(f, N, weight, a, c, tol)

    return NilFunction(int(N), base, AdditiveBacking(int(N), ((1.0 + 0j, k, f),)), f"A[{N},{k}]{f.label}")


def _additive_sum(N: int, terms, tol: float = K.WB_TOL) -> NilFunction:
    parts = [(coef, additive_brezin(f, N, k, tol)) for coef, k, f in terms]

    def base(a, c):
        acc = 0j
        for coef, F in parts:
            acc = acc + coef * F.base(a, c)
        return acc

    return NilFunction(N, base, AdditiveBacking(N, tuple(terms)), f"A[{N}]sum")


def additive_expansion(F: NilFunction) -> NilFunction:
    """Rewrite a W_{N,d}(chi)-backed function as a sum of additive Brezin images.

    n -> chi(n d / N) has period N, so it expands in the characters psi_k of Z/N.
    """
    b = F.backing
    if not isinstance(b, WBBacking) or b.N <= 0:
        raise NotImplementedError("additive expansion needs a W_{N,d}(chi) backing with N > 0")
    N, d, chi = b.N, b.d, b.chi
    q = N // d
    w = np.array([char_value(chi, n // q) if n % q == 0 else 0 for n in range(N)], dtype=complex)
    coef = np.fft.fft(w) / N  # w(n) = sum_k coef[k] e^{2 pi i k n / N}
    const = wb_constant(N, d)
    terms = tuple((complex(const * coef[k]), k, b.f) for k in range(N) if abs(coef[k]) > 1e-15)
    return _additive_sum(N, terms)


def wb_inverse(F: NilFunction, nodes: int = K.INVERSE_NODES) -> LineFunction:
    """Inverse map: the stored line function, or quadrature in the classical N = 1 case."""
    b = F.backing
    if isinstance(b, WBBacking):
        return b.f
    if isinstance(b, AdditiveBacking) and len(b.terms) == 1 and b.terms[0][0] == 1:
        return b.terms[0][2]
    if F.N != 1:
        raise NotImplementedError("inversion of an unbacked function is only available for N = 1")
    a = (np.arange(nodes) + 0.5) / nodes

    def f(x):
        x = np.asarray(x, dtype=float)
        n = np.floor(x)
        vals = F.base_eval(a, (x - n)[..., None])
        return np.mean(vals * np.exp(-2j * math.pi * n[..., None] * a), axis=-1)

    return LineFunction(f, Decay("schwartz", amp=1.0, order=8.0), None, None, "none", f"W^-1{F.label}")


def dilation_on_nil(F: NilFunction, t: float) -> NilFunction:
    """V(t) = W o U(t) o W^{-1} on a backed function."""
    b = F.backing
    if isinstance(b, WBBacking):
        return wb_map(line_dilate(b.f, t), b.N, b.d, b.chi)
    if isinstance(b, AdditiveBacking):
        return _additive_sum(b.N, tuple((coef, k, line_dilate(f, t)) for coef, k, f in b.terms))
    raise NotImplementedError("V(t) needs a Weil-Brezin backing")


def wb_hecke_expansion(f: LineFunction, N: int, d: int, chi: DirichletCharacter, m: int) -> NilFunction:
    """sum_{e | (m, N/d)} sqrt(phi(de)/phi(d)) chi(m/e) W_{N,de}(chi|_{de})(f(m x)).

    This is T_m applied to W_{N,d}(chi) f, written in the Weil-Brezin images.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    g = hecke_line(f, m)
    d1 = math.gcd(m, abs(N) // d)
    parts = []
    for e in divisors(d1):
        w = math.sqrt(totient(d * e) / totient(d)) * char_value(chi, m // e)
        if w != 0:
            parts.append((w, wb_map(g, N, d * e, restrict(chi, d * e))))

    def base(a, c):
        acc = 0j
        for w, G in parts:
            acc = acc + w * G.base(a, c)
        return acc

    return NilFunction(int(N), base, None, f"T{m}-expansion")
