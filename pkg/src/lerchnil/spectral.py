"""Two-sided Mellin transforms, the line operator D = x d/dx + 1/2, the
operator Delta_L on H_N, and spectral synthesis on the critical line.

    M_k(f)(s) = int_R f(x) sgn(x)^k |x|^{s-1} dx
              = int_R (f(e^u) + (-1)^k f(-e^u)) e^{s u} du

The second form is what gets discretized: the trapezoid rule in u converges
geometrically for analytic f, and the window in u comes from the decay
descriptor at +infinity and from |f(0)| e^{Re(s) u} at -infinity.

Inversion on Re(s) = 1/2:

    f(x) = sum_k sgn(x)^k int M_k(f)(1/2 + i tau) |x|^{-1/2 - i tau} dtau / (4 pi)
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import constants as K
from .lerch import EvalResult, SingularLineError, lerch_pm
from .linefunctions import LineFunction, l2_inner, line_D_apply, line_dilate
from .nilmanifold import NilFunction
from .weil_brezin import WBBacking, wb_map

__all__ = [
    "MEASURES",
    "SpectralSample",
    "mellin",
    "mellin_eval",
    "mellin_many",
    "sample_spectrum",
    "spectral_synthesis",
    "parseval_check",
    "multiplier_table",
    "delta_L_apply",
    "delta_L_eigen_residual",
    "delta_L_convergence_ratio",
    "theta_mellin_check",
    "tau_grid",
]

MEASURES = {"4pi": 4 * math.pi, "2sqrt2pi": 2 * math.sqrt(2) * math.pi}


# -- Mellin transforms ------------------------------------------------------

def _window(f: LineFunction, k: int, sigma: float, tol: float = 1e-17):
    g0 = abs(complex(f(np.array([0.0]))[0]) * (1 + (-1) ** k) / 2)
    if g0 < 1e-300:
        g0 = 0.0
    R = max(f.decay.radius(tol), 1e-3)
    if sigma > 0:
        R = max(f.decay.radius(tol / max(1.0, R) ** sigma), R)
    u_max = math.log(R) + 0.5
    # near 0 the integrand is ~ g0 x^sigma, or ~ x^{sigma+1} when the parity part vanishes
    rate = sigma if g0 else sigma + 1
    if rate <= 0:
        return None
    u_min = max((math.log(tol * rate) - math.log(max(g0, 1.0))) / rate, -700.0)
    return u_min, u_max, g0


def mellin_many(f: LineFunction, k: int, s, h: float = K.MELLIN_STEP):
    """M_k(f) at an array of s sharing one real part range; returns (values, errors)."""
    if k not in (0, 1):
        raise ValueError("k must be 0 or 1")
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    sigma = float(s.real.min())
    win = _window(f, k, sigma)
    if win is None:
        return np.full(s.shape, complex("nan")), np.full(s.shape, np.inf)
    u_min, u_max, g0 = win
    n = int(math.ceil((u_max - u_min) / (2 * h))) * 2
    u = np.linspace(u_min, u_max, n + 1)
    step = (u_max - u_min) / n
    x = np.exp(u)
    g = f(x) + (-1) ** k * f(-x)
    w = np.full(n + 1, step)
    w[0] = w[-1] = step / 2
    kern = np.exp(np.outer(s, u))
    fine = kern @ (g * w)
    w2 = np.full(n // 2 + 1, 2 * step)
    w2[0] = w2[-1] = step
    coarse = kern[:, ::2] @ (g[::2] * w2)
    tail = g0 * np.exp(sigma * u_min) / max(sigma, 1e-300) if g0 else 0.0
    return fine, np.abs(fine - coarse) + tail


def mellin_eval(f: LineFunction, k: int, s: complex, h: float = K.MELLIN_STEP) -> EvalResult:
    """M_k(f)(s) with an error estimate; pole_flag marks a divergent integral."""
    s = complex(s)
    g0 = abs(complex(f(np.array([0.0]))[0]) * (1 + (-1) ** k) / 2)
    if s.real <= 0 and g0 > 1e-300:
        return EvalResult(complex("nan"), math.inf, True)
    v, e = mellin_many(f, k, [s], h)
    return EvalResult(complex(v[0]), float(e[0]), not np.isfinite(v[0]))


def mellin(f: LineFunction, k: int, s: complex, h: float = K.MELLIN_STEP) -> complex:
    r = mellin_eval(f, k, s, h)
    if r.pole_flag:
        raise ValueError(f"Mellin integral diverges at s={s}: f(0) does not vanish on this parity")
    return r.value


# -- sampled spectra --------------------------------------------------------

@dataclass(frozen=True)
class SpectralSample:
    """Values of M_k(f)(1/2 + i tau) on a tau grid, sorted by (k, tau)."""
    entries: Tuple[Tuple[int, float, complex], ...]
    measure_convention: str = K.MELLIN_MEASURE

    def __post_init__(self):
        if self.measure_convention not in MEASURES:
            raise ValueError(f"unknown measure {self.measure_convention!r}")
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: (e[0], e[1]))))

    def slice(self, k: int):
        rows = [(t, v) for kk, t, v in self.entries if kk == k]
        return np.array([r[0] for r in rows]), np.array([r[1] for r in rows], dtype=complex)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "tau", "re", "im"])
        for k, t, v in self.entries:
            w.writerow([k, repr(float(t)), repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()


def tau_grid(T: float, h: float) -> np.ndarray:
    n = int(round(T / h))
    return h * np.arange(-n, n + 1)


def sample_spectrum(f: LineFunction, T: float = K.SYNTH_T, h: float = K.SYNTH_H,
                    measure: str = K.MELLIN_MEASURE) -> SpectralSample:
    taus = tau_grid(T, h)
    entries = []
    for k in (0, 1):
        vals, _ = mellin_many(f, k, 0.5 + 1j * taus)
        entries.extend((k, float(t), complex(v)) for t, v in zip(taus, vals))
    return SpectralSample(tuple(entries), measure)


def _trap_weights(taus: np.ndarray) -> np.ndarray:
    if taus.size < 2:
        return np.zeros_like(taus)
    w = np.empty_like(taus)
    w[1:-1] = (taus[2:] - taus[:-2]) / 2
    w[0] = (taus[1] - taus[0]) / 2
    w[-1] = (taus[-1] - taus[-2]) / 2
    return w


def spectral_synthesis(samples: SpectralSample, x, measure: str | None = None):
    """Trapezoid evaluation of the inversion integral at x (x != 0)."""
    const = MEASURES[measure or samples.measure_convention]
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)[..., None]
    out = np.zeros(x.shape, dtype=complex)
    for k in (0, 1):
        taus, vals = samples.slice(k)
        if taus.size == 0:
            continue
        w = _trap_weights(taus)
        kern = ax ** (-0.5 - 1j * taus)
        out = out + np.sign(x) ** k * (kern @ (vals * w))
    return out / const


def parseval_check(f: LineFunction, T: float = K.SYNTH_T, h: float = K.SYNTH_H) -> dict:
    """||f||^2 against int (|M_0|^2 + |M_1|^2) dtau / c for each measure constant c."""
    S = sample_spectrum(f, T, h)
    total = 0.0
    for k in (0, 1):
        taus, vals = S.slice(k)
        total += float(np.sum(np.abs(vals) ** 2 * _trap_weights(taus)))
    norm2 = l2_inner(f, f).real
    return {"norm2": norm2, **{name: total / c for name, c in MEASURES.items()}}


def multiplier_table(f: LineFunction, taus: Iterable[float]) -> List[Tuple[int, float, float]]:
    """Rows (k, tau, |M_k(Df) + i tau M_k(f)|) on the critical line."""
    taus = np.asarray(list(taus), dtype=float)
    Df = line_D_apply(f)
    rows = []
    for k in (0, 1):
        s = 0.5 + 1j * taus
        mf, _ = mellin_many(f, k, s)
        mdf, _ = mellin_many(Df, k, s)
        res = np.abs(mdf + 1j * taus * mf)
        rows.extend((k, float(t), float(r)) for t, r in zip(taus, res))
    return rows


# -- Delta_L ----------------------------------------------------------------

def _lattice(F: NilFunction):
    b = F.backing
    if b is not None and hasattr(b, "d") and hasattr(b, "s"):
        return abs(b.N), b.d
    return None


def delta_L_apply(F: NilFunction, mode: str = "exact", h: float = K.DELTA_H) -> NilFunction:
    """Delta_L = (1/2 pi i) d_a d_c + N c d_c + N/2.

    ``exact`` uses Delta_L W_{N,d}(chi) f = N W_{N,d}(chi)(D f) and needs a
    Weil-Brezin backing with a derivative; ``fd`` uses central differences.
    """
    N = F.N
    if mode == "exact":
        b = F.backing
        if not isinstance(b, WBBacking):
            raise NotImplementedError("exact mode needs a Weil-Brezin backed function")
        G = wb_map(line_D_apply(b.f) * N, b.N, b.d, b.chi)
        return G
    if mode != "fd":
        raise ValueError(f"mode must be 'exact' or 'fd', got {mode!r}")
    lat = _lattice(F)

    def base(a, c):
        a, c = np.broadcast_arrays(np.asarray(a, float), np.asarray(c, float))
        if lat is not None:
            n, d = lat
            near = (np.abs(n * a - np.round(n * a)) < 2 * h * n) | (np.abs(d * c - np.round(d * c)) < 2 * h * d)
            if np.any(near):
                raise SingularLineError("finite-difference stencil reaches a singular line")
        f = F.base
        cross = f(a + h, c + h) - f(a + h, c - h) - f(a - h, c + h) + f(a - h, c - h)
        dc = (f(a, c + h) - f(a, c - h)) / (2 * h)
        return cross / (4 * h * h * 2j * math.pi) + N * c * dc + 0.5 * N * f(a, c)

    return NilFunction(N, base, None, f"DeltaL_fd{F.label}", F.depth + 1)


def delta_L_eigen_residual(F: NilFunction, eigenvalue: complex, points, h: float = K.DELTA_H,
                           richardson: bool = False) -> float:
    """max |Delta_L F - lambda F| / max(|F|, 1) over points (fd mode).

    With ``richardson`` the stencils at h and h/2 are combined to cancel the h^2 term.
    """
    a, c = (np.asarray(v, float) for v in zip(*points))
    G = delta_L_apply(F, "fd", h).base_eval(a, c)
    if richardson:
        G = (4 * delta_L_apply(F, "fd", h / 2).base_eval(a, c) - G) / 3
    base = F.base_eval(a, c)
    return float(np.max(np.abs(G - eigenvalue * base) / np.maximum(np.abs(base), 1.0)))


def delta_L_convergence_ratio(F: NilFunction, points, h: float = K.DELTA_H, eigenvalue=None) -> float:
    """err(h) / err(h/2) for the fd stencil; about 4 for a second-order rule.

    The reference is the exact Delta_L for a backed F, else eigenvalue * F.
    """
    a, c = (np.asarray(v, float) for v in zip(*points))
    if eigenvalue is None:
        ref = delta_L_apply(F, "exact").base_eval(a, c)
    else:
        ref = eigenvalue * F.base_eval(a, c)
    e1 = np.max(np.abs(delta_L_apply(F, "fd", h).base_eval(a, c) - ref))
    e2 = np.max(np.abs(delta_L_apply(F, "fd", h / 2).base_eval(a, c) - ref))
    return float(e1 / e2)


# -- theta integral ---------------------------------------------------------

def theta_mellin_check(f: LineFunction, k: int, s: complex, a: float, c: float,
                       u_range: Tuple[float, float] = (-6.0, 4.0), h: float = 0.01) -> dict:
    """int_0^inf [Th(t; a, c) + (-1)^k Th(t; -a, -c)] t^{s-1} dt.

    Th(t; a, c) = sum_n f((n + c) t) e^{2 pi i n a} = t^{-1/2} W(U(t) f)(a, c).
    Returned next to M_k(f)(s) L^{+-}(s, a, c), its half, and the value obtained
    when the sqrt(t) of U(t) is kept inside the integral.
    """
    s = complex(s)
    us = np.arange(u_range[0], u_range[1] + h / 2, h)
    plain = np.empty(us.size, dtype=complex)
    for i, u in enumerate(us):
        t = math.exp(u)
        W = wb_map(line_dilate(f, t), 1)
        plain[i] = (W.base_eval(a, c) + (-1) ** k * W.base_eval(-a, -c)) / math.sqrt(t)
    w = np.full(us.size, h)
    w[0] = w[-1] = h / 2
    integral = complex(np.sum(plain * np.exp(s * us) * w))
    with_sqrt = complex(np.sum(plain * np.exp((s + 0.5) * us) * w))
    sign = 1 if k == 0 else -1
    full = mellin(f, k, s) * lerch_pm(sign, s, a, c).value
    shifted = mellin(f, k, s + 0.5) * lerch_pm(sign, s + 0.5, a, c).value
    return {
        "integral": integral,
        "full": full,
        "half": 0.5 * full,
        "integral_with_sqrt": with_sqrt,
        "shifted": shifted,
    }

