"""R-intertwining, Lerch functional equations, Hecke eigenrelations and the
coarse multiplicative decomposition, all checked as pointwise identities.

Two readings of the intertwining and functional-equation coefficients are
available through ``form``:

* ``"derived"`` (default): the identity that the numerics confirm,
      R W_{N,d}(chi|_d) f = tau(chi*)/sqrt|N| sum_dt C_{N,d}(dt) W_{N,dt}(conj chi*|_dt)(F U(N) f)
  and, for L-functions,
      L(1-s; -c, a, z-ac) = sgn(N)^k tau(chi*) |N|^{s-1} gamma(s)
                            sum_dt sqrt(phi(d)/phi(dt)) C_{N,d}(dt) L_{N,dt}(conj chi*|_dt, s; a, c, z).
* ``"printed"``: the same sums with an extra chi*(-1), no sqrt(phi) rescaling
  and no sgn(N)^k.  It agrees with ``"derived"`` exactly when chi* is even,
  N > 0 and only d = dt contributes, or when phi(d) = phi(dt) for all
  contributing dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import constants as K
from .characters import (DirichletCharacter, divisors, enumerate_characters, fe_coefficient, gauss_sum,
                         restrict, totient)
from .gamma import gamma_pm
from .lerch import lerch_l_array
from .linefunctions import LineFunction, fourier, gaussian, line_dilate
from .nilmanifold import NilFunction, QuadratureSpec, hecke, hecke_adjoint, r_op
from .weil_brezin import wb_map

__all__ = [
    "LerchBacking",
    "Block",
    "DecompositionIndex",
    "coarse_decomposition",
    "lerch_nil",
    "clean_points",
    "intertwine_rhs",
    "intertwine_residual",
    "fe_sides",
    "fe_residual",
    "decomposition_gram",
    "r_permutes_coarse_blocks",
    "hecke_eigen_residual",
    "adjoint_hecke_eigen_residual",
]

FORMS = ("derived", "printed")


@dataclass(frozen=True)
class LerchBacking:
    sign: int
    N: int
    d: int
    chi: DirichletCharacter
    s: complex


def lerch_nil(sign: int, N: int, d: int, chi: DirichletCharacter, s: complex) -> NilFunction:
    """L^{sign}_{N,d}(chi, s, ., .) as an element of H_N."""

    def base(a, c):
        return lerch_l_array(sign, N, d, chi, s, a, c)[0]

    return NilFunction(int(N), base, LerchBacking(sign, int(N), d, chi, complex(s)),
                       f"L{'+' if sign > 0 else '-'}[{N},{d},{chi.index}]({complex(s):g})")


# -- coarse decomposition ---------------------------------------------------

@dataclass(frozen=True)
class Block:
    core: DirichletCharacter
    members: Tuple[int, ...]

    @property
    def conductor(self) -> int:
        return self.core.modulus

    def to_json(self) -> dict:
        return {"core": self.core.to_json(), "conductor": self.conductor, "members": list(self.members)}


@dataclass(frozen=True)
class DecompositionIndex:
    N: int
    blocks: Tuple[Block, ...]

    def size(self) -> int:
        return sum(len(b.members) for b in self.blocks)

    def pairs(self) -> List[Tuple[int, DirichletCharacter, int]]:
        """(d, chi*|_d, block number) for every summand H_{N,d}(chi)."""
        return [(d, restrict(b.core, d), i) for i, b in enumerate(self.blocks) for d in b.members]

    def conjugate_block(self, i: int) -> int:
        target = self.blocks[i].core.conj()
        return next(j for j, b in enumerate(self.blocks) if b.core == target)

    def to_json(self) -> dict:
        return {"N": self.N, "blocks": [b.to_json() for b in self.blocks]}


def coarse_decomposition(N: int) -> DecompositionIndex:
    """Group the summands H_{N,d}(chi) of H_N by primitive core."""
    if N == 0:
        raise ValueError("N must be nonzero")
    n = abs(N)
    blocks = []
    for e in divisors(n):
        for chi in enumerate_characters(e):
            if not chi.is_primitive:
                continue
            members = tuple(d for d in divisors(n) if d % e == 0)
            blocks.append(Block(chi, members))
    return DecompositionIndex(int(N), tuple(blocks))


# -- sample points ----------------------------------------------------------

def _dist_int(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.abs(x - np.round(x))


def _regular(args, N: int, levels: Sequence[int], margin: float) -> bool:
    for a, c in args:
        if _dist_int(abs(N) * a) < margin:
            return False
        if any(_dist_int(d * c) < margin for d in levels):
            return False
    return True


def _arguments(a: float, c: float, ms: Sequence[int], adjoint: bool, fe: bool):
    out = [(a, c)]
    if fe:
        out.append((-c, a))
    for m in ms:
        if adjoint:
            out.extend((m * a, (c + k) / m) for k in range(m))
            out.extend((a, c + k / m) for k in range(m))  # T_m T_m^* composition
        else:
            out.extend(((a + j) / m, m * c) for j in range(m))
    return out


def clean_points(points, N: int, levels: Sequence[int], ms: Sequence[int] = (), adjoint: bool = False,
                 fe: bool = False, margin: float = K.NUDGE_MARGIN, step=K.NUDGE):
    """Shift each point by multiples of ``step`` until every operator argument is regular.

    A point is regular when |N| a and d c (d in ``levels``) stay ``margin`` away
    from the integers at every argument the identity evaluates.  Points that are
    already regular are returned unchanged, so the seeded set stays seeded.
    """
    out = []
    for a, c in points:
        a0, c0 = float(a), float(c)
        for k in range(200):
            aa, cc = a0 + k * step[0], c0 + k * step[1]
            if _regular(_arguments(aa, cc, ms, adjoint, fe), N, levels, margin):
                break
        else:  # pragma: no cover - 200 shifts always suffice for small N, m
            raise RuntimeError(f"could not find a regular point near ({a}, {c})")
        out.append((aa, cc))
    return tuple(out)


def _as_arrays(points):
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return pts[:, 0], pts[:, 1]


def _check_core(chi_star: DirichletCharacter, d: int, N: int):
    if not chi_star.is_primitive:
        raise ValueError("chi_star must be primitive")
    if N == 0 or abs(N) % d or d % chi_star.modulus:
        raise ValueError(f"need e | d | |N|; got e={chi_star.modulus}, d={d}, N={N}")


def _form(form: str):
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")


# -- R intertwining ---------------------------------------------------------

def intertwine_rhs(N: int, d: int, chi_star: DirichletCharacter, f: LineFunction,
                   form: str = "derived") -> NilFunction:
    _check_core(chi_star, d, N)
    _form(form)
    g = fourier(line_dilate(f, N))
    eps = gauss_sum(chi_star, 1).value / math.sqrt(abs(N))
    if form == "printed":
        eps *= chi_star(-1)
    cbar = chi_star.conj()
    parts = []
    for dt in divisors(abs(N)):
        C = fe_coefficient(N, d, dt, chi_star)
        if C != 0:
            parts.append((eps * C, wb_map(g, N, dt, restrict(cbar, dt))))

    def base(a, c):
        acc = 0j
        for w, G in parts:
            acc = acc + w * G.base(a, c)
        return acc

    return NilFunction(int(N), base, None, "R-intertwine-rhs")


def intertwine_residual(N: int, d: int, chi_star: DirichletCharacter, f: LineFunction | None = None,
                        grid: int = 16, form: str = "derived") -> float:
    """sup over a grid x grid of (a, c) in [0,1)^2 of |R W f - RHS|."""
    f = gaussian(1.0) if f is None else f
    lhs = r_op(wb_map(f, N, d, restrict(chi_star, d)))
    rhs = intertwine_rhs(N, d, chi_star, f, form)
    u = (np.arange(grid) + 0.5) / grid
    A, C = np.meshgrid(u, u, indexing="ij")
    return float(np.max(np.abs(lhs.base_eval(A, C) - rhs.base_eval(A, C))))


# -- functional equations ---------------------------------------------------

def fe_sides(sign: int, N: int, d: int, chi_star: DirichletCharacter, s: complex, points,
             z: float = 0.0, form: str = "derived"):
    """Both sides of the functional equation at the given (a, c) points."""
    _check_core(chi_star, d, N)
    _form(form)
    s = complex(s)
    a, c = _as_arrays(points)
    lhs, _ = lerch_l_array(sign, N, d, restrict(chi_star, d), 1 - s, -c, a, z - a * c)
    k = 0 if sign > 0 else 1
    pref = gauss_sum(chi_star, 1).value * abs(N) ** (s - 1) * gamma_pm(sign, s)
    if form == "printed":
        pref *= chi_star(-1)
    elif N < 0:
        pref *= (-1) ** k
    cbar = chi_star.conj()
    rhs = np.zeros_like(lhs)
    for dt in divisors(abs(N)):
        C = fe_coefficient(N, d, dt, chi_star)
        if C == 0:
            continue
        if form == "derived":
            C *= math.sqrt(totient(d) / totient(dt))
        rhs = rhs + C * lerch_l_array(sign, N, dt, restrict(cbar, dt), s, a, c, z)[0]
    return lhs, pref * rhs


def fe_residual(sign: int, N: int, d: int, chi_star: DirichletCharacter, s: complex, points=None,
                z: float = 0.0, form: str = "derived") -> float:
    """max |LHS - RHS| over points; the seeded set is nudged off singular lines."""
    if points is None:
        points = clean_points(K.FE_POINTS, N, divisors(abs(N)), fe=True)
    lhs, rhs = fe_sides(sign, N, d, chi_star, s, points, z, form)
    return float(np.max(np.abs(lhs - rhs)))


# -- Gram matrices and R block permutation -----------------------------------

def _gram_vectors(N: int, profiles: Sequence[LineFunction], q: QuadratureSpec):
    idx = coarse_decomposition(N)
    A, C, W = q.grid()
    vecs, owner, labels = [], [], []
    for d, chi, blk in idx.pairs():
        for g in profiles:
            vecs.append(wb_map(g, N, d, chi).base_eval(A, C).ravel())
            owner.append(blk)
            labels.append((d, chi.index, g.label))
    return idx, np.array(vecs), np.array(owner), W.ravel(), (A, C), labels


def decomposition_gram(N: int, f: LineFunction | None = None, q: QuadratureSpec | None = None):
    """Gram matrix of the unit vectors W_{N,d}(chi) f over every summand of H_N.

    Returns (labels, gram); off-diagonal entries measure orthogonality.
    """
    f = gaussian(1.0) if f is None else f
    q = QuadratureSpec() if q is None else q
    idx, V, _, w, _, labels = _gram_vectors(N, [f], q)
    G = (V * w) @ V.conj().T
    nrm = np.sqrt(np.real(np.diag(G)))
    return labels, G / np.outer(nrm, nrm)


def r_permutes_coarse_blocks(N: int, f: LineFunction | None = None, q: QuadratureSpec | None = None,
                             widths: Sequence[float] = (1.0, 2.0)) -> dict:
    """Project R(W_{N,d}(chi|_d) f) onto per-block test spans and report leaked mass.

    Each block is probed with W_{N,d}(chi|_d) applied to Gaussians of the given
    widths.  Leak is the norm of the projection onto blocks other than the
    conjugate one, relative to the norm of the image.
    """
    f = gaussian(1.0) if f is None else f
    q = QuadratureSpec() if q is None else q
    idx, V, owner, w, (A, C), labels = _gram_vectors(N, [gaussian(t) for t in widths], q)
    nb = len(idx.blocks)
    bases = []
    for j in range(nb):
        Vj = V[owner == j]
        G = (Vj * w) @ Vj.conj().T
        bases.append((Vj, np.linalg.inv(G)))
    rows = []
    for d, chi, i in idx.pairs():
        img = r_op(wb_map(f, N, d, chi)).base_eval(A, C).ravel()
        total = float(np.real(np.sum(np.abs(img) ** 2 * w)))
        target = idx.conjugate_block(i)
        mass = []
        for Vj, Ginv in bases:
            b = (Vj.conj() * w) @ img  # <img, v_i>
            mass.append(float(np.real(b.conj() @ Ginv @ b)))
        leaked = sum(m for j, m in enumerate(mass) if j != target)
        rows.append({
            "d": d,
            "chi": chi.index,
            "block": i,
            "image_block": target,
            "captured": mass[target] / total,
            "leak": math.sqrt(max(leaked, 0.0) / total),
        })
    return {"N": N, "blocks": nb, "rows": rows, "max_leak": max(r["leak"] for r in rows)}


# -- Hecke eigenrelations ---------------------------------------------------

def _check_ms(N: int, ms: Sequence[int]):
    bad = [m for m in ms if m < 1 or math.gcd(m, abs(N)) != 1]
    if bad:
        raise ValueError(f"Hecke indices must be positive and coprime to N={N}: {bad}")


def hecke_eigen_residual(sign: int, N: int, d: int, chi: DirichletCharacter, s: complex,
                         ms: Sequence[int] = (2, 3, 5, 7), points=None) -> float:
    """max over m and points of |T_m L - chi(m) m^{-s} L| / max(|L|, 1)."""
    _check_ms(N, ms)
    if points is None:
        points = clean_points(K.FE_POINTS, N, [d], ms=ms)
    L = lerch_nil(sign, N, d, chi, s)
    a, c = _as_arrays(points)
    base = L.base_eval(a, c)
    scale = np.maximum(np.abs(base), 1.0)
    worst = 0.0
    for m in ms:
        lam = chi(m) * m ** (-complex(s))
        r = np.abs(hecke(L, m).base_eval(a, c) - lam * base) / scale
        worst = max(worst, float(r.max()))
    return worst


def adjoint_hecke_eigen_residual(sign: int, N: int, d: int, chi: DirichletCharacter, s: complex,
                                 ms: Sequence[int] = (2, 3), points=None) -> Dict[str, float]:
    """T_m^* L against both candidate eigenvalues conj(chi(m)) m^{s-1} and conj(chi(m)) m^{1-s}.

    Also reports the composition residual |T_m T_m^* L - L/m|.
    """
    _check_ms(N, ms)
    if points is None:
        points = clean_points(K.FE_POINTS, N, [d], ms=ms, adjoint=True)
    s = complex(s)
    L = lerch_nil(sign, N, d, chi, s)
    a, c = _as_arrays(points)
    base = L.base_eval(a, c)
    scale = np.maximum(np.abs(base), 1.0)
    out = {"reciprocal": 0.0, "printed": 0.0, "composition": 0.0}
    for m in ms:
        TL = hecke_adjoint(L, m)
        got = TL.base_eval(a, c)
        cb = chi(m).conjugate()
        out["reciprocal"] = max(out["reciprocal"], float((np.abs(got - cb * m ** (s - 1) * base) / scale).max()))
        out["printed"] = max(out["printed"], float((np.abs(got - cb * m ** (1 - s) * base) / scale).max()))
        comp = hecke(TL, m).base_eval(a, c)
        out["composition"] = max(out["composition"], float((np.abs(comp - base / m) / scale).max()))
    out["holds"] = "reciprocal" if out["reciprocal"] <= out["printed"] else "printed"
    return out
