"""Functions on H(Z)\\H(R) with a fixed central index N, and operators on them.

A NilFunction stores base(a, c) = F(a, c, 0) as a vectorized evaluator on all
of R^2; the z-dependence is the central character e^{2 pi i N z}.  Points of
the Heisenberg group are triples [a, c, z] with the product
[a, c, z][a', c', z'] = [a + a', c + c', z + z' + c a'].

Operators build new evaluators lazily.  Composition depth is capped so that
a runaway chain of Hecke operators fails loudly instead of exhausting time.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from . import constants as K

__all__ = [
    "NilFunction",
    "QuadratureSpec",
    "group_mul",
    "evaluate",
    "inner_product",
    "norm",
    "heisenberg_act",
    "hecke",
    "hecke_adjoint",
    "r_op",
    "r_inv",
    "j_op",
    "beta",
    "hecke_heisenberg_commutation_check",
    "sup_residual",
    "dump_csv",
    "random_points",
]

BaseEval = Callable[[np.ndarray, np.ndarray], np.ndarray]


class PeriodicityError(ValueError):
    """base_eval violates the twisted periodicity of H_N."""


@dataclass(frozen=True, eq=False)
class NilFunction:
    N: int
    base: BaseEval
    backing: Optional[Any] = field(default=None, repr=False)
    label: str = ""
    depth: int = 0

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N == 0:
            raise ValueError("central index N must be a nonzero integer")
        if self.depth > K.MAX_DEPTH:
            raise RecursionError(f"operator composition deeper than {K.MAX_DEPTH}")

    @property
    def central_index(self) -> int:
        return self.N

    def __call__(self, a, c, z=0.0):
        return evaluate(self, a, c, z)

    def base_eval(self, a, c):
        a, c = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(c, dtype=float))
        return np.asarray(self.base(a, c), dtype=complex)

    def periodicity_defect(self, n: int = K.VALIDATE_POINTS, seed: int = 0) -> float:
        a, c = random_points(n, seed)
        f0 = self.base_eval(a, c)
        fa = self.base_eval(a + 1, c)
        fc = self.base_eval(a, c + 1)
        scale = np.maximum(1.0, np.abs(f0))
        da = np.abs(fa - f0) / scale
        dc = np.abs(fc - np.exp(-2j * math.pi * self.N * a) * f0) / scale
        return float(max(da.max(), dc.max()))

    @classmethod
    def from_evaluator(cls, N: int, base: BaseEval, label: str = "", validate: bool = True,
                       tol: float = K.VALIDATE_TOL) -> "NilFunction":
        """Wrap a user evaluator, checking twisted periodicity on random points."""
        F = cls(int(N), base, None, label)
        if validate:
            defect = F.periodicity_defect()
            if defect > tol:
                raise PeriodicityError(f"twisted periodicity violated (defect {defect:.3g})")
        return F

    # linear structure
    def __add__(self, other: "NilFunction") -> "NilFunction":
        _same_level(self, other)
        return NilFunction(self.N, lambda a, c: self.base(a, c) + other.base(a, c), None,
                           f"({self.label} + {other.label})", max(self.depth, other.depth) + 1)

    def __mul__(self, k) -> "NilFunction":
        k = complex(k)
        return NilFunction(self.N, lambda a, c: k * self.base(a, c), None, f"{k:g}*{self.label}",
                           self.depth + 1)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1) * other


def _same_level(F: NilFunction, G: NilFunction):
    if F.N != G.N:
        raise ValueError(f"central indices differ ({F.N} vs {G.N})")


def _derived(F: NilFunction, base: BaseEval, label: str) -> NilFunction:
    return NilFunction(F.N, base, None, label, F.depth + 1)


def group_mul(g, h):
    a, c, z = g
    a2, c2, z2 = h
    return (a + a2, c + c2, z + z2 + c * a2)


def evaluate(F: NilFunction, a, c, z=0.0):
    z = np.asarray(z, dtype=float)
    return np.exp(2j * math.pi * F.N * z) * F.base_eval(a, c)


@dataclass(frozen=True)
class QuadratureSpec:
    rule: str = "midpoint"
    nodes_a: int = K.QUAD_MIDPOINT_NODES
    nodes_c: int = K.QUAD_MIDPOINT_NODES

    def __post_init__(self):
        if self.rule not in ("midpoint", "gauss_legendre"):
            raise ValueError(f"unknown quadrature rule {self.rule!r}")
        if self.nodes_a < 4 or self.nodes_c < 4:
            raise ValueError("need at least 4 nodes per direction")

    @classmethod
    def gauss_legendre(cls, n: int = K.QUAD_GL_NODES) -> "QuadratureSpec":
        return cls("gauss_legendre", n, n)

    def _rule(self, n: int):
        if self.rule == "midpoint":
            return (np.arange(n) + 0.5) / n, np.full(n, 1.0 / n)
        x, w = np.polynomial.legendre.leggauss(n)
        return 0.5 * (x + 1), 0.5 * w

    def grid(self):
        xa, wa = self._rule(self.nodes_a)
        xc, wc = self._rule(self.nodes_c)
        A, C = np.meshgrid(xa, xc, indexing="ij")
        return A, C, np.outer(wa, wc)


_DEFAULT_Q = QuadratureSpec()


def inner_product(F: NilFunction, G: NilFunction, q: QuadratureSpec = _DEFAULT_Q) -> complex:
    """<F, G> = int F conj(G) over the nilmanifold (exactly 0 across central indices)."""
    if F.N != G.N:
        return 0j
    A, C, W = q.grid()
    return complex(np.sum(F.base_eval(A, C) * np.conj(G.base_eval(A, C)) * W))


def norm(F: NilFunction, q: QuadratureSpec = _DEFAULT_Q) -> float:
    return math.sqrt(max(inner_product(F, F, q).real, 0.0))


def heisenberg_act(F: NilFunction, h) -> NilFunction:
    """Right translation: (rho_h F)(g) = F(g h)."""
    a1, c1, z1 = (float(v) for v in h)
    N = F.N

    def base(a, c):
        return np.exp(2j * math.pi * N * (z1 + c * a1)) * F.base(a + a1, c + c1)

    return _derived(F, base, f"rho[{a1:g},{c1:g},{z1:g}]{F.label}")


def hecke(F: NilFunction, m: int) -> NilFunction:
    """T_m F(a, c) = (1/|m|) sum_{j<|m|} F((a + j)/m, m c)."""
    m = int(m)
    if m == 0:
        raise ValueError("m must be nonzero")
    am = abs(m)

    def base(a, c):
        acc = 0j
        for j in range(am):
            acc = acc + F.base((a + j) / m, m * c)
        return acc / am

    return _derived(F, base, f"T{m}{F.label}")


def hecke_adjoint(F: NilFunction, m: int) -> NilFunction:
    """T_m^* F(a, c) = (1/m) sum_{k<m} e^{2 pi i k N a} F(m a, (c + k)/m)."""
    m = int(m)
    if m <= 0:
        raise ValueError("hecke_adjoint needs m >= 1 (compose with J for negative m)")
    N = F.N

    def base(a, c):
        acc = 0j
        for k in range(m):
            acc = acc + np.exp(2j * math.pi * k * N * a) * F.base(m * a, (c + k) / m)
        return acc / m

    return _derived(F, base, f"T{m}*{F.label}")


def r_op(F: NilFunction) -> NilFunction:
    """R F(a, c) = e^{-2 pi i N a c} F(-c, a)."""
    N = F.N
    return _derived(F, lambda a, c: np.exp(-2j * math.pi * N * a * c) * F.base(-c, a), f"R{F.label}")


def r_inv(F: NilFunction) -> NilFunction:
    """R^{-1} F(a, c) = e^{-2 pi i N a c} F(c, -a)."""
    N = F.N
    return _derived(F, lambda a, c: np.exp(-2j * math.pi * N * a * c) * F.base(c, -a), f"R^-1{F.label}")


def j_op(F: NilFunction) -> NilFunction:
    """J = R^2: F(a, c) -> F(-a, -c)."""
    return _derived(F, lambda a, c: F.base(-a, -c), f"J{F.label}")


def beta(t: float, h):
    """beta(t)[a, c, z] = [a/t, t c, z]."""
    a, c, z = h
    return (a / t, t * c, z)


def random_points(n: int, seed: int = K.SEED, lo: float = -1.5, hi: float = 1.5):
    rng = np.random.default_rng(seed)
    return rng.uniform(lo, hi, n), rng.uniform(lo, hi, n)


def sup_residual(F: NilFunction, G: NilFunction, points=None) -> float:
    """max |F - G| over sample points (a, c)."""
    if points is None:
        points = random_points(64)
    a, c = (np.asarray(p, dtype=float) for p in points)
    return float(np.max(np.abs(F.base_eval(a, c) - G.base_eval(a, c))))


def hecke_heisenberg_commutation_check(F: NilFunction, h, m: int, points=None) -> float:
    """Residual of rho_h T_m = T_m rho_{beta(m)h} and rho_h T_m^* = T_m^* rho_{beta(1/m)h}."""
    r1 = sup_residual(heisenberg_act(hecke(F, m), h), hecke(heisenberg_act(F, beta(m, h)), m), points)
    if m > 0:
        r2 = sup_residual(
            heisenberg_act(hecke_adjoint(F, m), h),
            hecke_adjoint(heisenberg_act(F, beta(1.0 / m, h)), m),
            points,
        )
    else:
        r2 = 0.0
    return max(r1, r2)


def dump_csv(F: NilFunction, grid_a: Sequence[float], grid_c: Sequence[float], out=None) -> str:
    """Rows (a, c, re, im) of base(a, c) on the tensor grid."""
    A, C = np.meshgrid(np.asarray(grid_a, float), np.asarray(grid_c, float), indexing="ij")
    V = F.base_eval(A, C)
    buf = out if out is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "c", "re", "im"])
    for a, c, v in zip(A.ravel(), C.ravel(), V.ravel()):
        w.writerow([repr(float(a)), repr(float(c)), repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue() if out is None else ""
