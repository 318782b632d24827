"""Test functions on the real line and the operations the Weil-Brezin maps need.

A LineFunction is a vectorized evaluator with a decay descriptor.  Registry
functions also carry a closed-form derivative and a closed-form Fourier
transform; both are propagated through dilation, modulation/translation and
linear combination so operator identities can be checked without numerical
differentiation.

Fourier convention: (F f)(y) = int f(x) e^{-2 pi i x y} dx, no prefactor.
This is the normalization under which R(W f) = W(F f) on H_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import constants as K

__all__ = [
    "Decay",
    "LineFunction",
    "gaussian",
    "hermite1",
    "bump",
    "zero_function",
    "from_name",
    "line_dilate",
    "schrodinger_act",
    "line_D_apply",
    "hecke_line",
    "fourier_transform",
    "fourier",
    "l2_inner",
]

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Decay:
    """Envelope |f(x)| <= bound(x) used to pick truncation radii.

    kind "gaussian":  amp * |x - center|^degree * exp(-pi t (x - center)^2)
    kind "compact":   zero outside [center - support, center + support]
    kind "schwartz":  amp * (1 + |x - center|)^(-order)
    kind "max":       pointwise max of the envelopes in `parts`
    """

    kind: str
    amp: float = 1.0
    t: float = 1.0
    degree: int = 0
    center: float = 0.0
    support: float = 0.0
    order: float = 4.0
    parts: tuple = ()

    def radius(self, tol: float) -> float:
        """R such that |f(x)| < tol whenever |x| > R."""
        if self.kind == "max":
            k = len(self.parts)
            return max(p.radius(tol / k) for p in self.parts)
        if self.kind == "compact":
            return abs(self.center) + self.support
        if self.kind == "schwartz":
            return abs(self.center) + max(0.0, (self.amp / tol) ** (1.0 / self.order))
        r = 1.0
        for _ in range(30):
            top = math.log(max(self.amp, 1e-300) / tol) + self.degree * math.log(max(r, 1.0))
            r_new = max(math.sqrt(max(top, 0.0) / (math.pi * self.t)), 1.0)
            if abs(r_new - r) < 1e-9:
                break
            r = r_new
        return abs(self.center) + r

    def _map(self, fn) -> "Decay":
        return replace(self, parts=tuple(fn(p) for p in self.parts))

    def dilate(self, lam: float) -> "Decay":
        # x -> |lam|^{1/2} f(lam x)
        if self.kind == "max":
            return self._map(lambda p: p.dilate(lam))
        al = abs(lam)
        amp = self.amp * math.sqrt(al)
        if self.kind == "gaussian":
            return replace(self, amp=amp * al**self.degree, t=self.t * lam * lam, center=self.center / lam)
        if self.kind == "compact":
            return replace(self, amp=amp, support=self.support / al, center=self.center / lam)
        return replace(self, amp=amp * max(1.0, al ** (-self.order)), center=self.center / lam)

    def shift(self, x0: float) -> "Decay":
        # x -> f(x + x0)
        if self.kind == "max":
            return self._map(lambda p: p.shift(x0))
        return replace(self, center=self.center - x0)

    def reflect(self) -> "Decay":
        if self.kind == "max":
            return self._map(lambda p: p.reflect())
        return replace(self, center=-self.center)

    def scale(self, k: float) -> "Decay":
        if self.kind == "max":
            return self._map(lambda p: p.scale(k))
        return replace(self, amp=self.amp * abs(k))


def _merge(d1: Decay, d2: Decay) -> Decay:
    return Decay("max", parts=(d1, d2))


@dataclass(frozen=True, eq=False)
class LineFunction:
    f: Evaluator
    decay: Decay
    deriv: Optional[Evaluator] = None
    ft: Optional[Callable[[], "LineFunction"]] = field(default=None, repr=False)
    parity: str = "none"
    label: str = ""

    def __call__(self, x):
        return self.f(np.asarray(x, dtype=float))

    def derivative(self, x):
        if self.deriv is None:
            raise NotImplementedError(f"{self.label or 'function'} has no derivative attached")
        return self.deriv(np.asarray(x, dtype=float))

    def __add__(self, other: "LineFunction") -> "LineFunction":
        ft = None
        if self.ft is not None and other.ft is not None:
            ft = lambda: self.ft() + other.ft()
        deriv = None
        if self.deriv is not None and other.deriv is not None:
            deriv = lambda x: self.deriv(x) + other.deriv(x)
        parity = self.parity if self.parity == other.parity else "none"
        return LineFunction(
            lambda x: self.f(x) + other.f(x), _merge(self.decay, other.decay), deriv, ft, parity,
            f"({self.label} + {other.label})",
        )

    def __mul__(self, k) -> "LineFunction":
        k = complex(k)
        ft = None if self.ft is None else (lambda: self.ft() * k)
        deriv = None if self.deriv is None else (lambda x: k * self.deriv(x))
        return LineFunction(lambda x: k * self.f(x), self.decay.scale(abs(k)), deriv, ft, self.parity,
                            f"{k:g}*{self.label}")

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * (-1)

    def reflect(self) -> "LineFunction":
        """x -> f(-x)."""
        ft = None if self.ft is None else (lambda: self.ft().reflect())
        deriv = None if self.deriv is None else (lambda x: -self.deriv(-x))
        return LineFunction(lambda x: self.f(-x), self.decay.reflect(), deriv, ft,
                            self.parity, f"{self.label}(-x)")


# -- registry ---------------------------------------------------------------

def gaussian(t: float = 1.0) -> LineFunction:
    """exp(-pi t x^2); its transform is t^{-1/2} exp(-pi y^2 / t)."""
    if t <= 0:
        raise ValueError("gaussian width must be positive")

    def ft():
        return gaussian(1.0 / t) * (1.0 / math.sqrt(t))

    return LineFunction(
        lambda x: np.exp(-math.pi * t * x * x) + 0j,
        Decay("gaussian", t=t),
        lambda x: -2 * math.pi * t * x * np.exp(-math.pi * t * x * x) + 0j,
        ft,
        "even",
        f"gaussian:{t:g}",
    )


def hermite1(t: float = 1.0) -> LineFunction:
    """x exp(-pi t x^2); its transform is -i y t^{-3/2} exp(-pi y^2 / t)."""
    if t <= 0:
        raise ValueError("hermite1 width must be positive")

    def ft():
        return hermite1(1.0 / t) * (-1j * t**-1.5)

    return LineFunction(
        lambda x: x * np.exp(-math.pi * t * x * x) + 0j,
        Decay("gaussian", t=t, degree=1),
        lambda x: (1 - 2 * math.pi * t * x * x) * np.exp(-math.pi * t * x * x) + 0j,
        ft,
        "odd",
        f"hermite1:{t:g}",
    )


def bump(w: float = 1.0) -> LineFunction:
    """exp(-1 / (1 - (x/w)^2)) on |x| < w, zero outside; no closed-form transform."""
    if w <= 0:
        raise ValueError("bump half-width must be positive")

    def f(x):
        u = x / w
        inside = np.abs(u) < 1
        out = np.zeros(np.shape(x), dtype=complex)
        uu = u[inside]
        out[inside] = np.exp(-1.0 / (1.0 - uu * uu))
        return out

    def df(x):
        u = x / w
        inside = np.abs(u) < 1
        out = np.zeros(np.shape(x), dtype=complex)
        uu = u[inside]
        q = 1.0 - uu * uu
        out[inside] = np.exp(-1.0 / q) * (-2.0 * uu / (w * q * q))
        return out

    return LineFunction(f, Decay("compact", support=w), df, None, "even", f"bump:{w:g}")


def zero_function() -> LineFunction:
    z = lambda x: np.zeros(np.shape(x), dtype=complex)
    return LineFunction(z, Decay("compact", support=0.0), z, lambda: zero_function(), "even", "zero")


_REGISTRY = {"gaussian": gaussian, "hermite1": hermite1, "bump": bump}


def from_name(spec: str) -> LineFunction:
    """Registry lookup: 'gaussian:t', 'hermite1:t' or 'bump:w' (parameter defaults to 1)."""
    name, _, arg = spec.partition(":")
    if name not in _REGISTRY:
        raise KeyError(f"unknown test function {name!r}; known: {', '.join(sorted(_REGISTRY))}")
    return _REGISTRY[name](float(arg) if arg else 1.0)


# -- operations ---------------------------------------------------------------

def line_dilate(f: LineFunction, t: float) -> LineFunction:
    """U(t) f (x) = |t|^{1/2} f(t x)."""
    if t == 0:
        raise ValueError("dilation parameter must be nonzero")
    r = math.sqrt(abs(t))
    deriv = None if f.deriv is None else (lambda x: r * t * f.deriv(t * x))
    ft = None if f.ft is None else (lambda: line_dilate(f.ft(), 1.0 / t))
    return LineFunction(lambda x: r * f.f(t * x), f.decay.dilate(t), deriv, ft, f.parity,
                        f"U({t:g}){f.label}")


def schrodinger_act(f: LineFunction, lam: float, h) -> LineFunction:
    """x -> e^{2 pi i a x} f(x + lam c) e^{2 pi i lam z} for h = [a, c, z]."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    a, c, z = (float(v) for v in h)
    if a == 0 and c == 0 and z == 0:
        return f
    shift = lam * c
    cz = np.exp(2j * math.pi * lam * z)

    def g(x):
        return np.exp(2j * math.pi * a * x) * f.f(x + shift) * cz

    deriv = None
    if f.deriv is not None:
        def deriv(x):
            e = np.exp(2j * math.pi * a * x) * cz
            return e * (2j * math.pi * a * f.f(x + shift) + f.deriv(x + shift))

    ft = None
    if f.ft is not None:
        # F g (y) = e^{2 pi i lam z} e^{-2 pi i a lam c} e^{2 pi i lam c y} (F f)(y - a)
        const = cz * np.exp(-2j * math.pi * a * shift)
        ft = lambda: schrodinger_act(f.ft(), 1.0, (shift, -a, 0.0)) * const

    parity = f.parity if (a == 0 and c == 0) else "none"
    return LineFunction(g, f.decay.shift(shift), deriv, ft, parity, f"pi[{a:g},{c:g},{z:g}]{f.label}")


def line_D_apply(f: LineFunction) -> LineFunction:
    """D f = x f'(x) + f(x)/2."""
    if f.deriv is None:
        raise NotImplementedError("D needs a derivative; attach one to the LineFunction")
    dec = f.decay
    if dec.kind == "gaussian":
        dec = replace(dec, degree=dec.degree + 2, amp=dec.amp * (1 + 2 * math.pi * dec.t))
    return LineFunction(lambda x: x * f.deriv(x) + 0.5 * f.f(x), dec, None, None, f.parity, f"D{f.label}")


def hecke_line(f: LineFunction, m: int) -> LineFunction:
    """x -> f(m x) (no normalization)."""
    if m == 0:
        raise ValueError("m must be nonzero")
    g = line_dilate(f, m) * (1.0 / math.sqrt(abs(m)))
    return replace(g, label=f"T{m}{f.label}")


def _trapezoid_ft(f: LineFunction, y: np.ndarray, tol: float) -> np.ndarray:
    R = f.decay.radius(tol * 1e-2)
    n = 256
    prev = None
    while True:
        x = np.linspace(-R, R, n + 1)
        w = np.full(n + 1, 2 * R / n)
        w[0] = w[-1] = R / n
        vals = f(x)
        kern = np.exp(-2j * math.pi * np.outer(y, x))
        cur = kern @ (vals * w)
        if prev is not None and np.max(np.abs(cur - prev)) < tol:
            return cur
        if n > 2**18:
            return cur
        prev = cur
        n *= 2


def fourier_transform(f: LineFunction, y, convention: str = "weil", tol: float = K.FOURIER_TOL):
    """Additive Fourier transform of f at y.

    convention "weil":    int f(x) e^{-2 pi i x y} dx (library default)
    convention "printed": (2 pi)^{-1/2} int f(x) e^{+2 pi i x y} dx
    Closed forms are used when f carries one; otherwise a doubling trapezoid rule.
    """
    y = np.asarray(y, dtype=float)
    if convention == "weil":
        yy = y
        pref = 1.0
    elif convention == "printed":
        yy = -y
        pref = 1.0 / math.sqrt(2 * math.pi)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    if f.ft is not None:
        out = f.ft()(yy)
    else:
        flat = yy.ravel()
        out = _trapezoid_ft(f, flat, tol).reshape(yy.shape)
    return pref * out


def fourier(f: LineFunction, tol: float = K.FOURIER_TOL) -> LineFunction:
    """The transform as a LineFunction (closed form when available)."""
    if f.ft is not None:
        return f.ft()
    dec = Decay("schwartz", amp=1.0, order=4.0)
    return LineFunction(lambda y: fourier_transform(f, y, tol=tol), dec, None, None, f.parity,
                        f"F{f.label}")


def l2_inner(f: LineFunction, g: LineFunction, tol: float = 1e-14, n: int = 4001) -> complex:
    """<f, g> = int f conj(g) dx by the trapezoid rule on the decay window."""
    R = max(f.decay.radius(tol), g.decay.radius(tol))
    x = np.linspace(-R, R, n)
    v = f(x) * np.conj(g(x))
    return complex(np.trapezoid(v, x))
