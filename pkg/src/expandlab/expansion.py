"""Exact image and incidence counting, coarse dimension, exponent fitting and
closed-form exponent bounds.

All membership tests hash exact element forms; floats appear only in the
statistics derived from the final counts.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from expandlab.errors import ArityError, DegenerateInputError, KindMismatchError
from expandlab.exactnum import BasisVector, TowerInt, rat, tower_pow
from expandlab.polyalg.multipoly import MultiPoly
from expandlab.polyalg.unipoly import UniPoly

RATIONAL = "rational"
TOWER = "tower"
VECTOR = "vector"


def element_kind(x) -> str:
    if isinstance(x, (int, Fraction)):
        return RATIONAL
    if isinstance(x, TowerInt):
        return TOWER
    if isinstance(x, BasisVector):
        return VECTOR
    raise KindMismatchError(f"unsupported element {x!r}")


@dataclass(frozen=True)
class FiniteSet:
    kind: str
    elements: frozenset

    @classmethod
    def of(cls, items: Iterable, kind: Optional[str] = None) -> "FiniteSet":
        items = list(items)
        if kind is None:
            kind = element_kind(items[0]) if items else RATIONAL
        for x in items:
            if element_kind(x) != kind:
                raise KindMismatchError(f"element {x!r} is not of kind {kind}")
        if kind == RATIONAL:
            items = [rat(x) for x in items]
        return cls(kind, frozenset(items))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, x):
        return x in self.elements

    def sorted(self) -> list:
        if self.kind == VECTOR:
            return sorted(self.elements, key=lambda v: v.items)
        return sorted(self.elements)

    @property
    def cardinality(self) -> int:
        return len(self.elements)

    def int_values(self) -> Optional[list]:
        """Elements as Python ints when the set is rational with integer members."""
        if self.kind != RATIONAL:
            return None
        if all(x.denominator == 1 for x in self.elements):
            return sorted(x.numerator for x in self.elements)
        return None


# --------------------------------------------------------------------------
# chunked parallel union


def _chunks(seq: list, n: int) -> list:
    n = max(1, min(n, len(seq)))
    size = -(-len(seq) // n) if seq else 1
    return [seq[i : i + size] for i in range(0, len(seq), size)] or [[]]


def _union_map(fn, args_list: list, workers: int) -> set:
    if workers <= 1 or len(args_list) <= 1:
        out = set()
        for args in args_list:
            out |= fn(*args)
        return out
    out = set()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_star, [(fn, a) for a in args_list]):
            out |= part
    return out


def _sum_map(fn, args_list: list, workers: int) -> int:
    if workers <= 1 or len(args_list) <= 1:
        return sum(fn(*args) for args in args_list)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_star, [(fn, a) for a in args_list]))


def _star(packed):
    fn, args = packed
    return fn(*args)


# --------------------------------------------------------------------------
# images


def _horner_values(polys: Sequence[UniPoly], values: Sequence) -> set:
    out = set()
    for p in polys:
        cs = p.int_coeffs() if all(isinstance(v, int) for v in values) else None
        cs = cs or p.coeffs
        rev = cs[::-1]
        for a in values:
            acc = 0
            for c in rev:
                acc = acc * a + c
            out.add(acc)
    return out


@dataclass(frozen=True)
class PowerMap:
    """x -> x^(2^j), kept symbolic so huge degrees cost nothing."""

    j: int

    @property
    def degree(self) -> int:
        return 1 << self.j

    def __call__(self, x):
        if isinstance(x, TowerInt):
            return tower_pow(x, self.j)
        return x ** self.degree

    def __str__(self):
        return f"t^(2^{self.j})"


def _tower_exponent(p) -> int:
    """i with p = t^(2^i); anything else is not a tower-compatible member."""
    if isinstance(p, PowerMap):
        return p.j
    k = p.degree
    if k < 1 or p.lc != 1 or any(p.coeffs[:-1]) or k & (k - 1):
        raise KindMismatchError(f"{p} is not of the form t^(2^i)")
    return k.bit_length() - 1


def image_set(family: Sequence[UniPoly], A: FiniteSet, workers: int = 1) -> set:
    """The set {f(a) : f in family, a in A}."""
    family = list(family)
    if A.kind == TOWER:
        shifts = {_tower_exponent(p) for p in family}
        return {tower_pow(a, j) for a in A.elements for j in shifts}
    if A.kind != RATIONAL:
        raise KindMismatchError(f"cannot evaluate polynomials on {A.kind} elements")
    if any(isinstance(p, PowerMap) for p in family):
        raise KindMismatchError("symbolic power maps only act on tower elements")
    values = A.int_values() or A.sorted()
    return _union_map(_horner_values, [(family, c) for c in _chunks(values, workers)], workers)


def image_size(family: Sequence[UniPoly], A: FiniteSet, workers: int = 1) -> int:
    return len(image_set(family, A, workers))


def _multi_image_chunk(coeff_polys, xs, ys_chunk) -> set:
    out = set()
    for ys in ys_chunk:
        cs = [c(*ys) if c.arity else c.constant_term() for c in coeff_polys]
        if all(isinstance(v, int) or v.denominator == 1 for v in cs) and all(isinstance(a, int) for a in xs):
            cs = [int(v) for v in cs]
        rev = cs[::-1]
        for a in xs:
            acc = 0
            for c in rev:
                acc = acc * a + c
            out.add(acc)
    return out


def image_set_multi(f: MultiPoly, A: FiniteSet, Bs: Sequence[FiniteSet], workers: int = 1) -> set:
    if f.arity != 1 + len(Bs):
        raise ArityError(f"polynomial arity {f.arity} needs {f.arity - 1} y-sets, got {len(Bs)}")
    for S in (A, *Bs):
        if S.kind != RATIONAL:
            raise KindMismatchError("multivariate images need rational sets")
    xs = A.int_values() or A.sorted()
    if not Bs:
        return _horner_values([f.to_uni()], xs)
    parts = f.coefficients_in(0)
    deg = max(parts) if parts else 0
    ys_vars = f.variables[1:]
    coeff_polys = [parts.get(k, MultiPoly.zero(ys_vars)) for k in range(deg + 1)]
    grids = [S.int_values() or S.sorted() for S in Bs]
    ys_all = list(itertools.product(*grids))
    return _union_map(
        _multi_image_chunk, [(coeff_polys, xs, c) for c in _chunks(ys_all, workers)], workers
    )


def image_size_multi(f: MultiPoly, A: FiniteSet, Bs: Sequence[FiniteSet], workers: int = 1) -> int:
    """|{f(a, b0, ..., b_{m-1})}| over A x B0 x ... x B_{m-1}."""
    return len(image_set_multi(f, A, Bs, workers))


# --------------------------------------------------------------------------
# incidences

GRAPH = "graph"
IMPLICIT = "implicit"
GRAPH_VARIABLES = ("x", "d")
IMPLICIT_VARIABLES = ("x", "d", "y0")


@dataclass(frozen=True)
class SurfaceSpec:
    """U = {(x, d, f(x, d))} in graph mode, U = {F(x, d, y0) = 0} in implicit mode."""

    mode: str
    poly: MultiPoly

    def __post_init__(self):
        want = GRAPH_VARIABLES if self.mode == GRAPH else IMPLICIT_VARIABLES
        if self.mode not in (GRAPH, IMPLICIT):
            raise ValueError(f"unknown surface mode {self.mode!r}")
        if self.poly.variables != want:
            raise ArityError(f"{self.mode} surface must be over {want}, got {self.poly.variables}")

    @classmethod
    def graph(cls, f: MultiPoly) -> "SurfaceSpec":
        return cls(GRAPH, f)

    @classmethod
    def implicit(cls, F: MultiPoly) -> "SurfaceSpec":
        return cls(IMPLICIT, F)

    def as_implicit(self) -> "SurfaceSpec":
        if self.mode == IMPLICIT:
            return self
        y = MultiPoly.var("y0", IMPLICIT_VARIABLES)
        return SurfaceSpec(IMPLICIT, y - self.poly.rename(IMPLICIT_VARIABLES))


def _graph_chunk(f, a_chunk, ds, bset) -> int:
    count = 0
    for a in a_chunk:
        for d in ds:
            if f(a, d) in bset:
                count += 1
    return count


def _implicit_chunk(F, a_chunk, ds, bs) -> int:
    count = 0
    for a in a_chunk:
        for d in ds:
            for b in bs:
                if F(a, d, b) == 0:
                    count += 1
    return count


def incidence_surface(U: SurfaceSpec, A: FiniteSet, D: FiniteSet, B: FiniteSet, workers: int = 1) -> int:
    """|U ∩ (A x D x B)| counted exactly."""
    for S in (A, D, B):
        if S.kind != RATIONAL:
            raise KindMismatchError("incidence counting needs rational sets")
    a_vals, d_vals = A.sorted(), D.sorted()
    chunks = _chunks(a_vals, workers)
    if U.mode == GRAPH:
        return _sum_map(_graph_chunk, [(U.poly, c, d_vals, B.elements) for c in chunks], workers)
    return _sum_map(_implicit_chunk, [(U.poly, c, d_vals, B.sorted()) for c in chunks], workers)


# --------------------------------------------------------------------------
# statistics


@dataclass(frozen=True)
class CoarseDim:
    value: float
    xi: float
    size: int


def coarse_dim(size: int, xi: float) -> CoarseDim:
    """log_xi(size), the finite-scale stand-in for coarse dimension."""
    if size < 1:
        raise ValueError("size must be >= 1")
    if not xi > 1:
        raise ValueError("scale xi must exceed 1")
    value = 0.0 if size == 1 else math.log(size) / math.log(xi)
    return CoarseDim(value, float(xi), int(size))


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    residual: float
    points: tuple = field(default=())

    @property
    def eta(self) -> float:
        return self.slope - 1.0

    def predict(self, n) -> float:
        return math.exp(self.intercept) * n ** self.slope


def fit_exponent(points: Sequence[tuple]) -> ExponentFit:
    """Least-squares line of ln(m) against ln(n); the slope estimates 1 + eta.

    ``residual`` is the root-mean-square deviation in log space.
    """
    points = [(int(n), int(m)) for n, m in points]
    if len(points) < 2:
        raise ValueError("need at least two points to fit an exponent")
    ns = [n for n, _ in points]
    if len(set(ns)) != len(ns):
        raise ValueError("sizes n must be distinct")
    if min(min(n, m) for n, m in points) < 1:
        raise ValueError("sizes and image sizes must be >= 1")
    X = np.log(np.array(ns, dtype=float))
    Y = np.log(np.array([m for _, m in points], dtype=float))
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return ExponentFit(float(slope), float(intercept), rms, tuple(sorted(points)))


@dataclass
class BoundParams:
    eps: float = 0.5
    eta: float = 0.0
    eta0: float = 0.0
    delta: float = 0.1
    gamma: float = 0.5
    gamma_prime: float = 0.75
    k: int = 3
    n: int = 1
    M: int = 1
    m: int = 1
    r: float = 3.0
    t: float = 0.0
    c: float = 1.0
    c_prime: float = 1.0

    def __post_init__(self):
        for name in ("eps", "eta", "eta0", "delta", "gamma", "gamma_prime", "r", "t", "c", "c_prime"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.c <= 0 or self.c_prime <= 0:
            raise ValueError("absolute constants c and c_prime must be positive")


def eta_unbalanced_er(m: int, eps: float, c_prime: float = 1.0) -> float:
    """m^-2 * 2^(-c'/eps): the exponent gain for m y-variables."""
    if m < 1 or eps <= 0 or c_prime <= 0:
        raise ValueError("need m >= 1, eps > 0, c_prime > 0")
    return m ** -2 * 2.0 ** (-c_prime / eps)


def eta0_main1d(eps: float, c: float = 1.0) -> float:
    """eps * (1 + 1/eps)^-1 * 2^(-4/(c*eps) + 7), with c clamped to at most 1."""
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0,1]")
    if c <= 0:
        raise ValueError("c must be positive")
    c = min(1.0, c)
    return eps / (1 + 1 / eps) * 2.0 ** (-4 / (c * eps) + 7)


def delta_jz(p: BoundParams = None, **kw) -> float:
    """Supremum of admissible delta: min(gamma'/k, 2^(-ceil(2kr/(c*gamma)) - 2))."""
    if p is None:
        p = BoundParams(**kw)
    elif kw:
        raise TypeError("pass either BoundParams or keyword values, not both")
    for name in ("gamma", "gamma_prime", "r", "k", "c"):
        if getattr(p, name) <= 0:
            raise ValueError(f"{name} must be positive")
    ratio = 2 * Fraction(p.k) * Fraction(p.r) / (Fraction(p.c) * Fraction(p.gamma))
    second = math.ldexp(1.0, -math.ceil(ratio) - 2)
    return min(p.gamma_prime / p.k, second)


def gp_statistic(A: FiniteSet, probes: Sequence[UniPoly]) -> int:
    """Largest fiber |{a in A : p(a) = v}| over probes p and values v."""
    if A.kind != RATIONAL:
        raise KindMismatchError("general-position statistic needs a rational set")
    best = 0
    values = A.int_values() or A.sorted()
    for p in probes:
        if p.is_constant():
            raise DegenerateInputError(f"constant probe {p}")
        fibers: dict = {}
        for a in values:
            v = p(a)
            fibers[v] = fibers.get(v, 0) + 1
        best = max(best, max(fibers.values(), default=0))
    return best
