"""Sparse multivariate polynomials over the rationals.

A :class:`MultiPoly` carries an ordered tuple of variable names, by default
``("x", "y0", ..., "y{m-1}")``. Terms are stored as a dict from exponent
tuples to nonzero Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from expandlab.exactnum import format_rat, rat
from expandlab.polyalg.unipoly import UniPoly, _join


def default_variables(arity: int) -> tuple:
    if not 1 <= arity <= 11:
        raise ValueError("arity must be between 1 and 11 (x, y0..y9)")
    return ("x",) + tuple(f"y{i}" for i in range(arity - 1))


class MultiPoly:
    __slots__ = ("variables", "terms", "_hash", "_compiled")

    def __init__(self, terms: Mapping[tuple, object] = None, variables: Sequence[str] = ("x",)):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match arity {n}")
            c = rat(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms: dict = clean
        self._hash = None
        self._compiled = None

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, variables) -> "MultiPoly":
        return cls({}, variables)

    @classmethod
    def const(cls, c, variables) -> "MultiPoly":
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name: str, variables) -> "MultiPoly":
        variables = tuple(variables)
        exps = tuple(1 if v == name else 0 for v in variables)
        if sum(exps) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls({exps: 1}, variables)

    @classmethod
    def from_uni(cls, p: UniPoly, var: str, variables) -> "MultiPoly":
        variables = tuple(variables)
        idx = variables.index(var)
        terms = {}
        for k, c in enumerate(p.coeffs):
            e = [0] * len(variables)
            e[idx] = k
            terms[tuple(e)] = c
        return cls(terms, variables)

    # basic properties -----------------------------------------------------

    @property
    def arity(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var) -> int:
        i = self._index(var)
        return max((e[i] for e in self.terms), default=-1)

    def depends_on(self, var) -> bool:
        i = self._index(var)
        return any(e[i] for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.arity, Fraction(0))

    def leading_term(self):
        """Leading (exponents, coefficient) in graded lexicographic order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=lambda e: (sum(e), e))
        return e, self.terms[e]

    def _index(self, var) -> int:
        if isinstance(var, int):
            return var
        return self.variables.index(var)

    def _check(self, other: "MultiPoly"):
        if other.variables != self.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    # arithmetic -----------------------------------------------------------

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(other, self.variables)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(terms, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = rat(other)
            return MultiPoly({e: c * v for e, v in self.terms.items()}, self.variables)
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(terms, self.variables)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = MultiPoly.const(1, self.variables), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(other, self.variables)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    # evaluation and substitution -----------------------------------------

    def __call__(self, *point):
        return eval_poly(self, point)

    def compiled(self):
        """Terms as (int numerator, exponents) over a common denominator."""
        if self._compiled is None:
            den = 1
            for c in self.terms.values():
                den = den * c.denominator // _gcd(den, c.denominator)
            items = tuple((int(c * den), e) for e, c in self.terms.items())
            self._compiled = (den, items)
        return self._compiled

    def substitute(self, assignment: Mapping[str, object], variables=None) -> "MultiPoly":
        """Substitute numbers or MultiPolys (over ``variables``) for variables."""
        variables = tuple(variables) if variables is not None else self.variables
        result = MultiPoly.zero(variables)
        pow_cache: dict = {}

        def power(name, k):
            key = (name, k)
            if key not in pow_cache:
                val = assignment[name] if name in assignment else MultiPoly.var(name, variables)
                if isinstance(val, MultiPoly):
                    pow_cache[key] = val ** k
                else:
                    pow_cache[key] = MultiPoly.const(rat(val) ** k, variables)
            return pow_cache[key]

        for e, c in self.terms.items():
            term = MultiPoly.const(c, variables)
            for name, k in zip(self.variables, e):
                if k:
                    if name not in assignment and name not in variables:
                        raise ValueError(f"variable {name!r} has no image")
                    term = term * power(name, k)
            result = result + term
        return result

    def rename(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-embed into a (super)set of variables, matching by name."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        terms = {}
        for e, c in self.terms.items():
            new = [0] * len(variables)
            for i, k in zip(idx, e):
                new[i] = k
            terms[tuple(new)] = c
        return MultiPoly(terms, variables)

    def drop(self, var) -> "MultiPoly":
        """Remove a variable the polynomial does not depend on."""
        i = self._index(var)
        if self.depends_on(i):
            raise ValueError(f"polynomial depends on {self.variables[i]}")
        vs = self.variables[:i] + self.variables[i + 1 :]
        return MultiPoly({e[:i] + e[i + 1 :]: c for e, c in self.terms.items()}, vs)

    def coefficients_in(self, var) -> dict:
        """Split as sum_k c_k * var^k; returns {k: MultiPoly without var}."""
        i = self._index(var)
        vs = self.variables[:i] + self.variables[i + 1 :]
        parts: dict = {}
        for e, c in self.terms.items():
            parts.setdefault(e[i], {})[e[:i] + e[i + 1 :]] = c
        return {k: MultiPoly(t, vs) for k, t in parts.items()}

    def to_uni(self, var=None) -> UniPoly:
        if self.arity == 1:
            i = 0
        else:
            i = self._index(var)
            for e in self.terms:
                if any(k for j, k in enumerate(e) if j != i):
                    raise ValueError("polynomial is not univariate")
        deg = self.degree_in(i)
        cs = [Fraction(0)] * (deg + 1)
        for e, c in self.terms.items():
            cs[e[i]] = c
        return UniPoly(cs)

    # display --------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def to_text(self) -> str:
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for v, k in zip(self.variables, e):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            mono = "*".join(factors)
            if not mono:
                parts.append(format_rat(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rat(c)}*{mono}")
        return _join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r}, {self.variables})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def eval_poly(f: MultiPoly, point: Sequence) -> Fraction:
    """Exact value of ``f`` at ``point`` (one coordinate per variable)."""
    if len(point) != f.arity:
        raise ValueError(f"point has {len(point)} coordinates, polynomial arity is {f.arity}")
    point = [rat(p) for p in point]
    total = Fraction(0)
    for e, c in f.terms.items():
        v = c
        for p, k in zip(point, e):
            if k:
                v *= p ** k
        total += v
    return total


def eval_int_grid(f: MultiPoly, point: Sequence[int]) -> Fraction:
    """Fast path for integer points; uses the common-denominator form."""
    den, items = f.compiled()
    total = 0
    for c, e in items:
        for p, k in zip(point, e):
            if k:
                c *= p ** k
        total += c
    return Fraction(total, den) if den != 1 else total


def mono(variables: Sequence[str], **exps) -> tuple:
    return tuple(exps.get(v, 0) for v in variables)
