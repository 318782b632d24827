"""Dirichlet characters, Gauss sums and functional-equation coefficients.

A character mod d is stored as an exponent vector against a fixed generating
set of (Z/dZ)*.  The generating set is built prime power by prime power and
glued with the Chinese remainder theorem: for odd p^k we take the smallest
primitive root, for 2^k with k >= 3 the pair {-1, 5}, for 4 the element -1.
Values are produced as exact roots of unity from reduced fractions.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Tuple

__all__ = [
    "DirichletCharacter",
    "GaussSumResult",
    "factorize",
    "totient",
    "moebius",
    "divisors",
    "enumerate_characters",
    "principal_character",
    "char_value",
    "primitive_core",
    "restrict",
    "gauss_sum_bruteforce",
    "gauss_sum_closed",
    "gauss_sum",
    "fe_coefficient",
    "root_of_unity",
]


def factorize(n: int) -> Dict[int, int]:
    if n <= 0:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(n: int) -> int:
    if n <= 0:
        raise ValueError(f"totient is defined for n >= 1, got {n}")
    r = n
    for p in factorize(n):
        r = r // p * (p - 1)
    return r


def moebius(n: int) -> int:
    if n <= 0:
        raise ValueError(f"moebius is defined for n >= 1, got {n}")
    f = factorize(n)
    if any(k > 1 for k in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> List[int]:
    n = abs(n)
    if n == 0:
        raise ValueError("divisors of 0 are not a finite list")
    small = [k for k in range(1, math.isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def root_of_unity(q: Fraction) -> complex:
    """e^{2 pi i q}, exact on the quarter turns."""
    q = q - math.floor(q)
    if q == 0:
        return 1 + 0j
    if q == Fraction(1, 2):
        return -1 + 0j
    if q == Fraction(1, 4):
        return 1j
    if q == Fraction(3, 4):
        return -1j
    return cmath.exp(2j * math.pi * float(q))


def _primitive_root(pk: int, p: int) -> int:
    phi = totient(pk)
    fac = list(factorize(phi))
    for g in range(2, pk):
        if math.gcd(g, p) != 1:
            continue
        if all(pow(g, phi // q, pk) != 1 for q in fac):
            return g
    raise ArithmeticError(f"no primitive root mod {pk}")  # pragma: no cover


@dataclass(frozen=True)
class _Group:
    modulus: int
    generators: Tuple[int, ...]
    orders: Tuple[int, ...]
    logs: Dict[int, Tuple[int, ...]]  # unit residue -> exponent vector


def _crt_lift(x: int, pk: int, d: int) -> int:
    """Element of Z/d that is x mod pk and 1 mod d/pk."""
    rest = d // pk
    if rest == 1:
        return x % d
    # solve y = x (mod pk), y = 1 (mod rest)
    inv = pow(rest, -1, pk)
    return (1 + rest * ((x - 1) * inv % pk)) % d


@lru_cache(maxsize=None)
def _group(d: int) -> _Group:
    if d <= 0:
        raise ValueError(f"modulus must be positive, got {d}")
    gens: List[int] = []
    orders: List[int] = []
    local: List[Tuple[int, int, str]] = []  # (prime power, prime, kind)
    for p, k in sorted(factorize(d).items()) if d > 1 else []:
        pk = p**k
        if p == 2:
            if k == 1:
                continue
            gens.append(_crt_lift(-1, pk, d))
            orders.append(2)
            local.append((pk, 2, "sign"))
            if k >= 3:
                gens.append(_crt_lift(5, pk, d))
                orders.append(2 ** (k - 2))
                local.append((pk, 2, "five"))
        else:
            g = _primitive_root(pk, p)
            gens.append(_crt_lift(g, pk, d))
            orders.append(totient(pk))
            local.append((pk, p, f"root:{g}"))

    # discrete-log tables per local factor
    tables = []
    for pk, p, kind in local:
        if kind == "sign":
            tables.append({r: (0 if r % 4 == 1 else 1) for r in range(pk) if r % 2})
        elif kind == "five":
            t = {}
            x = 1
            for b in range(pk // 4):
                t[x] = b
                t[(-x) % pk] = b
                x = x * 5 % pk
            tables.append(t)
        else:
            g = int(kind.split(":")[1])
            t = {}
            x = 1
            for b in range(totient(pk)):
                t[x] = b
                x = x * g % pk
            tables.append(t)

    logs: Dict[int, Tuple[int, ...]] = {}
    for r in range(d):
        if math.gcd(r, d) != 1:
            continue
        logs[r] = tuple(tab[r % pk] for tab, (pk, _, _) in zip(tables, local))
    if d == 1:
        logs[0] = ()
    return _Group(d, tuple(gens), tuple(orders), logs)


@lru_cache(maxsize=None)
def _exponent(d: int) -> int:
    return math.lcm(1, *_group(d).orders)


@lru_cache(maxsize=None)
def _roots(n: int) -> Tuple[complex, ...]:
    return tuple(root_of_unity(Fraction(k, n)) for k in range(n))


@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod `modulus` given by its exponent vector.

    chi(g_j) = exp(2 pi i exponents[j] / orders[j]) on the canonical generators.
    """

    modulus: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        grp = _group(self.modulus)
        if len(self.exponents) != len(grp.orders):
            raise ValueError(
                f"mod {self.modulus} needs {len(grp.orders)} exponents, got {len(self.exponents)}"
            )
        red = tuple(int(e) % o for e, o in zip(self.exponents, grp.orders))
        object.__setattr__(self, "exponents", red)

    @cached_property
    def _numerators(self) -> Tuple[int, ...]:
        """chi(r) = e^{2 pi i num[r] / L} with L the group exponent; -1 marks chi(r) = 0."""
        grp = _group(self.modulus)
        L = _exponent(self.modulus)
        w = [e * (L // o) for e, o in zip(self.exponents, grp.orders)]
        out = []
        for r in range(self.modulus):
            lg = grp.logs.get(r)
            out.append(-1 if lg is None else sum(a * b for a, b in zip(w, lg)) % L)
        return tuple(out)

    def phase(self, n: int) -> Fraction | None:
        """chi(n) = e^{2 pi i q}; returns q, or None when chi(n) = 0."""
        k = self._numerators[n % self.modulus]
        return None if k < 0 else Fraction(k, _exponent(self.modulus))

    def __call__(self, n) -> complex:
        return char_value(self, n)

    @cached_property
    def table(self) -> Tuple[complex, ...]:
        """Values chi(0), ..., chi(d-1)."""
        roots = _roots(_exponent(self.modulus))
        return tuple(0j if k < 0 else roots[k] for k in self._numerators)

    @cached_property
    def conductor(self) -> int:
        d = self.modulus
        num = self._numerators
        for f in divisors(d):
            if all(num[n] == 0 for n in range(1, d, f) if num[n] >= 0):
                return f
        return d  # pragma: no cover

    @property
    def parity(self) -> int:
        return 1 if self.phase(-1) == 0 else -1

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def index(self) -> int:
        """Rank of the exponent vector in the canonical enumeration."""
        idx = 0
        for e, o in zip(self.exponents, _group(self.modulus).orders):
            idx = idx * o + e
        return idx

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-e for e in self.exponents))

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "exponents": list(self.exponents),
            "conductor": self.conductor,
            "parity": self.parity,
        }

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, index {self.index})"


def enumerate_characters(d: int) -> List[DirichletCharacter]:
    if d <= 0:
        raise ValueError(f"modulus must be positive, got {d}")
    orders = _group(d).orders
    return [DirichletCharacter(d, ex) for ex in itertools.product(*(range(o) for o in orders))]


def principal_character(d: int) -> DirichletCharacter:
    return DirichletCharacter(d, tuple(0 for _ in _group(d).orders))


def char_value(chi: DirichletCharacter, r) -> complex:
    """chi(r), with chi(r) = 0 for non-integral rationals r."""
    if isinstance(r, Fraction):
        if r.denominator != 1:
            return 0j
        r = r.numerator
    elif isinstance(r, float):
        if not r.is_integer():
            return 0j
        r = int(r)
    return chi.table[int(r) % chi.modulus]


def _from_generator_phases(d: int, values) -> DirichletCharacter:
    """Character mod d whose value at each canonical generator is `values[j]` (a phase)."""
    grp = _group(d)
    ex = []
    for q, o in zip(values, grp.orders):
        e = q * o
        if e.denominator != 1:
            raise ValueError("phases are not compatible with the group structure")
        ex.append(int(e))
    return DirichletCharacter(d, tuple(ex))


def restrict(chi: DirichletCharacter, d: int) -> DirichletCharacter:
    """The character mod d induced by chi (chi.modulus must divide d)."""
    e = chi.modulus
    if d <= 0 or d % e:
        raise ValueError(f"modulus {e} does not divide {d}")
    phases = []
    for g in _group(d).generators:
        q = chi.phase(g)
        if q is None:  # pragma: no cover - generators are units mod d, hence mod e
            raise ArithmeticError("generator not a unit")
        phases.append(q)
    return _from_generator_phases(d, phases)


@lru_cache(maxsize=None)
def primitive_core(chi: DirichletCharacter) -> Tuple[DirichletCharacter, int]:
    """The primitive character inducing chi, together with its conductor."""
    e = chi.conductor
    grp = _group(e)
    phases = []
    for g in grp.generators:
        # lift g to a unit mod d congruent to g mod e
        x = g
        while math.gcd(x, chi.modulus) != 1:
            x += e
        phases.append(chi.phase(x))
    return _from_generator_phases(e, phases), e


@dataclass(frozen=True)
class GaussSumResult:
    value: complex
    vanishes: bool
    formula_path: str  # "brute_force" | "closed_form_case_i" | "closed_form_case_ii"


def gauss_sum_bruteforce(chi: DirichletCharacter, m: int) -> GaussSumResult:
    d = chi.modulus
    tw = _roots(d)
    total = sum(v * tw[k * m % d] for k, v in enumerate(chi.table) if v != 0)
    total = complex(total)
    return GaussSumResult(total, abs(total) < 1e-9, "brute_force")


@lru_cache(maxsize=None)
def _tau(chi: DirichletCharacter) -> complex:
    return gauss_sum_bruteforce(chi, 1).value


def gauss_sum_closed(chi_star: DirichletCharacter, d: int, m: int) -> GaussSumResult:
    """G(m, chi*|_d) from the primitive character chi* mod e."""
    e = chi_star.modulus
    if d <= 0 or d % e:
        raise ValueError(f"conductor {e} does not divide {d}")
    g = math.gcd(m, d)  # gcd(0, d) = d
    m1, d1 = m // g, d // g
    if d1 % e:
        return GaussSumResult(0j, True, "closed_form_case_i")
    tau = _tau(chi_star)
    val = (
        Fraction(totient(d), totient(d1))
        * moebius(d1 // e)
        * char_value(chi_star, d1 // e)
        * char_value(chi_star, m1).conjugate()
        * tau
    )
    return GaussSumResult(complex(val), abs(val) < 1e-12, "closed_form_case_ii")


def gauss_sum(chi: DirichletCharacter, m: int) -> GaussSumResult:
    """Closed form via the primitive core."""
    core, _ = primitive_core(chi)
    return gauss_sum_closed(core, chi.modulus, m)


def fe_coefficient(N: int, d: int, dt: int, chi_star: DirichletCharacter) -> complex:
    """C_{N,d}(dt, chi*), the weight of level-dt component in the image of R."""
    n = abs(N)
    e = chi_star.modulus
    if N == 0 or d <= 0 or dt <= 0 or n % d or n % dt or d % e:
        raise ValueError(f"need d | |N|, dt | |N| and e | d; got N={N}, d={d}, dt={dt}, e={e}")
    d1 = d // math.gcd(n // dt, d)
    if d1 % e:
        return 0j
    arg = Fraction(N * d1, dt * d)
    if arg.denominator != 1:  # pragma: no cover - integral by construction
        raise ArithmeticError("non-integral character argument")
    return (
        math.sqrt(totient(dt) / totient(d))
        * (totient(d) / totient(d1))
        * moebius(d1 // e)
        * char_value(chi_star, d1 // e)
        * char_value(chi_star, arg).conjugate()
    )
