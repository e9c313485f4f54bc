"""Two-factor functional decomposition f = outer(inner(t)) over the rationals.

In characteristic zero a monic inner factor with zero constant term is
determined by its degree: its top coefficients are those of the approximate
r-th root of f, r = deg f / deg inner. So for each divisor of deg f there is
at most one candidate, and the outer factor is recovered by inner-adic
expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from expandlab.polyalg.unipoly import UniPoly


@dataclass(frozen=True)
class Decomposition:
    outer: UniPoly
    inner: UniPoly
    trivial: bool = False

    def recompose(self) -> UniPoly:
        return self.outer.compose(self.inner)


def divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def right_component(f: UniPoly, e: int) -> Optional[UniPoly]:
    """The normalized inner candidate of degree ``e``, or None if e does not divide deg f.

    The candidate only matches f's top coefficients; callers confirm it with
    :func:`left_component`.
    """
    n = f.degree
    if e < 1 or n < 1 or n % e:
        return None
    r = n // e
    lead = f.lc
    # c_j: coefficients of f/lc in powers of 1/t, so f/lc = t^n * C(1/t)
    c = [f.coeff(n - j) / lead for j in range(e)]
    # B = C^(1/r) by the power-series recurrence, truncated at order e
    alpha = Fraction(1, r)
    b = [Fraction(1)] + [Fraction(0)] * (e - 1)
    for k in range(1, e):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if c[j]:
                acc += ((alpha + 1) * j - k) * c[j] * b[k - j]
        b[k] = acc / k
    return UniPoly([0] + [b[e - i] for i in range(1, e + 1)])


def left_component(f: UniPoly, inner: UniPoly) -> Optional[UniPoly]:
    """The outer g with g(inner) == f, or None when no such g exists."""
    if inner.is_constant():
        return None
    digits = []
    q = f
    while not q.is_zero():
        q, r = q.divmod(inner)
        if r.degree > 0:
            return None
        digits.append(r.coeff(0))
    return UniPoly(digits)


def decompose_uni(f: UniPoly) -> list:
    """All nontrivial decompositions of ``f``, one per normalized inner factor.

    Sorted by inner degree, largest first.
    """
    n = f.degree
    found = []
    if n < 2:
        return found
    for e in sorted(divisors(n)[1:-1], reverse=True):
        inner = right_component(f, e)
        outer = left_component(f, inner)
        if outer is not None:
            found.append(Decomposition(outer, inner))
    return found


def compose_chain(*polys: UniPoly) -> UniPoly:
    """compose_chain(a, b, c) = a(b(c(t)))."""
    result = polys[-1]
    for p in reversed(polys[:-1]):
        result = p.compose(result)
    return result
