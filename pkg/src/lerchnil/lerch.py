"""Lerch zeta function, the symmetrized pair L^+/L^- and Lerch L-functions.

zeta(s, a, c) = sum_{n>=0} e^{2 pi i n a} (n + c)^{-s} is split into a head
of M explicit terms and a tail handled by contour integration along the
imaginary axis.  With z = e^{2 pi i a}, 0 < a < 1 and g(w) = (w + X)^{-s},

    sum_{j>=0} z^j g(j) = g(0)/2 - i int_0^inf [h(it) g(it) + h(-it) g(-it)] dt,
    h(w) = e^{2 pi i a w} / (e^{2 pi i w} - 1),

which is valid for every s (both sides are entire in s; for Re s > 1 it is
the residue theorem).  The integrand decays like e^{-2 pi min(a, 1-a) t}.
For a in Z the kernel no longer decays and Hermite's formula (Abel-Plana)
takes over.  The head length M grows like |Im s| / min(a, 1-a) so the
factor e^{|Im s| arg(X + it)} never outruns the exponential decay.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from . import constants as K
from .characters import DirichletCharacter, char_value, principal_character

__all__ = [
    "EvalResult",
    "LerchPoint",
    "SingularLineError",
    "lerch_zeta",
    "lerch_pm",
    "lerch_pm_array",
    "lerch_l",
    "lerch_l_array",
]


class SingularLineError(ValueError):
    """The two-sided series has a vanishing denominator |n + c| = 0."""


@dataclass(frozen=True)
class EvalResult:
    value: complex
    est_error: float
    pole_flag: bool = False


@dataclass(frozen=True)
class LerchPoint:
    sign: int
    N: int
    d: int
    chi: DirichletCharacter
    s: complex
    a: float
    c: float
    z: float = 0.0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.N == 0:
            raise ValueError("N must be nonzero")
        if self.d <= 0 or abs(self.N) % self.d:
            raise ValueError("d must divide |N|")
        if self.chi.modulus != self.d:
            raise ValueError("character modulus must equal d")

    @property
    def singular(self) -> bool:
        """(a, c) sits on a line where some term of the series blows up or a pole appears."""
        return _near_int(self.N * self.a) or _near_int(self.c * self.d)


def _near_int(x: float) -> bool:
    return abs(x - round(x)) < K.SINGULAR_EPS


@lru_cache(maxsize=None)
def _panels(rate: float, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, T] with doubling panels; T set by the decay rate."""
    x, w = np.polynomial.legendre.leggauss(order)
    T = 40.0 / rate
    edges = [0.0, 0.25]
    while edges[-1] < T:
        edges.append(edges[-1] * 2)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (x + 1))
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _cpow(base: np.ndarray, s: complex) -> np.ndarray:
    # principal branch; base is never on the negative real axis here
    return np.exp(-s * np.log(base))


def _head_length(s: complex, delta: float) -> int:
    return max(K.HEAD_MIN, int(math.ceil(abs(s.imag) / (math.pi * delta))) + 4)


def _head_capped(s: complex, delta: float) -> Tuple[int, bool]:
    M = _head_length(s, delta)
    return (M, False) if M <= K.HEAD_MAX else (K.HEAD_MAX, True)


def _zeta_tail_osc(s: complex, a: np.ndarray, X: np.ndarray, order: int) -> np.ndarray:
    """sum_{j>=0} e^{2 pi i a j} (j + X)^{-s} for 0 < a < 1 (arrays of equal shape)."""
    delta = float(np.min(np.minimum(a, 1 - a)))
    t, w = _panels(2 * math.pi * delta, order)
    a_ = a[..., None]
    X_ = X[..., None]
    tt = 2 * math.pi * t
    # h(it) = e^{-2 pi a t} / (e^{-2 pi t} - 1), h(-it) = e^{2 pi a t} / (e^{2 pi t} - 1)
    hp = np.exp(-a_ * tt) / np.expm1(-tt)
    hm = np.exp((a_ - 1) * tt) / (-np.expm1(-tt))
    gp = _cpow(X_ + 1j * t, s)
    gm = _cpow(X_ - 1j * t, s)
    integral = np.sum((hp * gp + hm * gm) * w, axis=-1)
    return 0.5 * _cpow(X, s) - 1j * integral


def _zeta_tail_hurwitz(s: complex, X: np.ndarray, order: int, pole_term: bool = True) -> np.ndarray:
    """sum_{j>=0} (j + X)^{-s} by Hermite's formula; pole_term=False drops X^{1-s}/(s-1)."""
    t, w = _panels(2 * math.pi, order)
    X_ = X[..., None]
    kern = 1.0 / np.expm1(2 * math.pi * t)
    diff = _cpow(X_ + 1j * t, s) - _cpow(X_ - 1j * t, s)
    integral = np.sum(diff * kern * w, axis=-1)
    out = 0.5 * _cpow(X, s) + 1j * integral
    return out + _cpow(X, s) * X / (s - 1) if pole_term else out


def _pole_difference(s: complex, X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
    """(X1^{1-s} - X2^{1-s}) / (s - 1), finite at s = 1."""
    u = 1 - s
    L1, L2 = np.log(X1), np.log(X2)
    x = u * (L1 - L2)
    small = np.abs(x) < 1e-300
    ratio = np.where(small, 1.0, np.expm1(np.where(small, 1.0, x)) / np.where(small, 1.0, x))
    return -np.exp(u * L2) * (L1 - L2) * ratio


def _hurwitz_odd_pair(s: complex, c: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """zeta(s, 0, c) - zeta(s, 0, 1 - c), continued through s = 1 where each piece has a pole."""
    M, _ = _head_capped(s, 1.0)
    n = np.arange(M)
    t1 = _cpow(c[:, None] + n, s)
    t2 = _cpow(1 - c[:, None] + n, s)
    head = (t1 - t2).sum(axis=1)
    X1, X2 = c + M, 1 - c + M
    hi = _zeta_tail_hurwitz(s, X1, K.GL_ORDER, False) - _zeta_tail_hurwitz(s, X2, K.GL_ORDER, False)
    lo = (_zeta_tail_hurwitz(s, X1, K.GL_ORDER_CHECK, False)
          - _zeta_tail_hurwitz(s, X2, K.GL_ORDER_CHECK, False))
    pole = _pole_difference(s, X1, X2)
    scale = np.maximum(np.abs(t1).max(axis=1), np.abs(t2).max(axis=1)) + np.abs(hi)
    err = np.abs(hi - lo) + 8 * (M + 50) * np.finfo(float).eps * scale
    return head + hi + pole, err


def _zeta_array(s: complex, a: np.ndarray, c: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """zeta(s, a, c) for a in [0, 1), c > 0; returns values and error estimates."""
    out = np.empty(a.shape, dtype=complex)
    err = np.empty(a.shape, dtype=float)
    hur = a == 0
    for mask, hurwitz in ((hur, True), (~hur, False)):
        if not mask.any():
            continue
        aa, cc = a[mask], c[mask]
        delta = 1.0 if hurwitz else float(np.min(np.minimum(aa, 1 - aa)))
        M, capped = _head_capped(s, delta)
        n = np.arange(M)
        terms = np.exp(2j * math.pi * np.outer(aa, n)) * _cpow(cc[:, None] + n, s)
        head = terms.sum(axis=1)
        X = cc + M
        zM = np.exp(2j * math.pi * aa * M)
        if hurwitz:
            t1 = _zeta_tail_hurwitz(s, X, K.GL_ORDER)
            t2 = _zeta_tail_hurwitz(s, X, K.GL_ORDER_CHECK)
        else:
            t1 = _zeta_tail_osc(s, aa, X, K.GL_ORDER)
            t2 = _zeta_tail_osc(s, aa, X, K.GL_ORDER_CHECK)
        out[mask] = head + zM * t1
        scale = np.abs(terms).max(axis=1) + np.abs(t1)
        err[mask] = np.abs(t1 - t2) + 8 * (M + 50) * np.finfo(float).eps * scale
        if capped:
            # a sits so close to an integer that the contour tail is not trustworthy
            err[mask] = np.inf
    return out, err


def _pole_near(s: complex, s0: float) -> bool:
    return abs(s - s0) < K.POLE_RADIUS


def lerch_zeta(s: complex, a: float, c: float) -> EvalResult:
    """zeta(s, a, c) = sum_{n>=0} e^{2 pi i n a}(n + c)^{-s}, continued in s."""
    s = complex(s)
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    a0 = a - math.floor(a)
    if a0 == 0 and _pole_near(s, 1.0):
        return EvalResult(complex("nan"), math.inf, True)
    v, e = _zeta_array(s, np.array([a0]), np.array([float(c)]))
    return EvalResult(complex(v[0]), float(e[0]))


def lerch_pm_array(sign: int, s: complex, a, c) -> Tuple[np.ndarray, np.ndarray]:
    """L^{sign}(s, a, c) over arrays of real a, c (broadcast together).

    Uses L(s, a+1, c) = L(s, a, c) and L(s, a, c+1) = e^{-2 pi i a} L(s, a, c) to
    reduce to 0 <= a < 1, 0 < c < 1.
    """
    s = complex(s)
    a, c = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(c, dtype=float))
    shape = a.shape
    a = a.ravel()
    c = c.ravel()
    fa = np.floor(a)
    a0 = a - fa
    a0[a0 >= 1.0] = 0.0
    fc = np.floor(c)
    c0 = c - fc
    if np.any(c0 == 0.0):
        raise SingularLineError("c is an integer: the two-sided series has a zero denominator")
    k = 0 if sign > 0 else 1
    n = a.size
    val = np.empty(n, dtype=complex)
    err = np.empty(n, dtype=float)
    # at integer a the odd combination has cancelling Hurwitz poles; combine them first
    odd = (a0 == 0.0) & (k == 1)
    if odd.any():
        val[odd], err[odd] = _hurwitz_odd_pair(s, c0[odd])
    rest = ~odd
    if rest.any():
        ar, cr = a0[rest], c0[rest]
        # second family: zeta(s, 1 - a0, 1 - c0) with 1 - a0 reduced into [0, 1)
        a1 = np.where(ar == 0.0, 0.0, 1.0 - ar)
        z, e = _zeta_array(s, np.concatenate([ar, a1]), np.concatenate([cr, 1.0 - cr]))
        m = ar.size
        sgn = -1.0 if k else 1.0
        val[rest] = z[:m] + sgn * np.exp(-2j * math.pi * ar) * z[m:]
        err[rest] = e[:m] + e[m:]
    phase = np.exp(-2j * math.pi * a0 * fc)
    return (val * phase).reshape(shape), err.reshape(shape)


def lerch_pm(sign: int, s: complex, a: float, c: float) -> EvalResult:
    """L^{+-}(s, a, c) = zeta(s, a, c) +- e^{-2 pi i a} zeta(s, 1-a, 1-c)."""
    s = complex(s)
    a0 = a - math.floor(a)
    c0 = c - math.floor(c)
    if a0 == 0 and sign > 0 and _pole_near(s, 1.0):
        return EvalResult(complex("nan"), math.inf, True)
    if c0 == 0 and _pole_near(s, 0.0):
        return EvalResult(complex("nan"), math.inf, True)
    v, e = lerch_pm_array(sign, s, np.array([a]), np.array([c]))
    return EvalResult(complex(v[0]), float(e[0]))


def lerch_l_array(sign: int, N: int, d: int, chi: DirichletCharacter, s: complex, a, c, z=0.0):
    """L^{sign}_{N,d}(chi, s, a, c, z) over arrays; returns (values, error estimates)."""
    if N == 0:
        raise ValueError("N must be nonzero")
    if d <= 0 or abs(N) % d:
        raise ValueError("d must divide |N|")
    if chi.modulus != d:
        raise ValueError("character modulus must equal d")
    s = complex(s)
    a, c, z = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, c, z)))
    if N < 0:
        # L_{-n,d}(chi, s, a, c, z) = sign * L_{n,d}(chi, s, -a, c, -z)
        v, e = lerch_l_array(sign, -N, d, chi, s, -a, c, -z)
        return sign * v, e
    val = np.zeros(a.shape, dtype=complex)
    err = np.zeros(a.shape, dtype=float)
    q = N // d
    for m in range(d):
        w = char_value(chi, m)
        if w == 0:
            continue
        lv, le = lerch_pm_array(sign, s, N * a, c + m / d)
        val += w * np.exp(2j * math.pi * q * m * a) * lv
        err += le
    pref = np.exp(2j * math.pi * N * z) * cmath.exp(-s * math.log(N))
    return pref * val, abs(pref) * err


def lerch_l(p: LerchPoint) -> EvalResult:
    """Lerch L-function at a parameter bundle."""
    s = p.s
    if p.chi.is_principal and _near_int(abs(p.N) * p.a) and p.sign > 0 and _pole_near(s, 1.0):
        return EvalResult(complex("nan"), math.inf, True)
    if _near_int(p.c * p.d) and _pole_near(s, 0.0):
        return EvalResult(complex("nan"), math.inf, True)
    v, e = lerch_l_array(p.sign, p.N, p.d, p.chi, s, p.a, p.c, p.z)
    return EvalResult(complex(v), float(e))


def trivial_point(sign: int, s: complex, a: float, c: float, z: float = 0.0) -> LerchPoint:
    return LerchPoint(sign, 1, 1, principal_character(1), complex(s), a, c, z)
