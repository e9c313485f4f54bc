"""Dense univariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from expandlab.exactnum import format_rat, rat


class UniPoly:
    """Immutable dense polynomial; ``coeffs[i]`` is the coefficient of t^i.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs", "_hash", "_ints")

    def __init__(self, coeffs: Iterable = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)
        self._hash = None
        self._ints = None

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        return cls([0] * k + [c])

    @classmethod
    def t(cls) -> "UniPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def int_coeffs(self) -> Optional[tuple]:
        """Integer coefficient tuple when every coefficient is integral."""
        if self._ints is None:
            if all(c.denominator == 1 for c in self.coeffs):
                self._ints = tuple(c.numerator for c in self.coeffs)
            else:
                self._ints = False
        return self._ints or None

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = rat(other)
            return UniPoly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = UniPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "UniPoly":
        return self * rat(c)

    def divmod(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return UniPoly(), self
        q = [Fraction(0)] * dq
        lead = other.lc
        for k in range(dq - 1, -1, -1):
            c = rem[k + other.degree] / lead
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(q), UniPoly(rem[: other.degree])

    def __call__(self, x):
        """Evaluate at a number (Horner) or compose with another UniPoly."""
        if isinstance(x, UniPoly):
            return self.compose(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc if self.coeffs else Fraction(0)

    def compose(self, inner: "UniPoly") -> "UniPoly":
        if inner.coeffs == _IDENTITY:
            return self
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift(self, a) -> "UniPoly":
        """Return p(t + a)."""
        if a == 0:
            return self
        return self.compose(UniPoly([a, 1]))

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def antiderivative(self) -> "UniPoly":
        """Antiderivative with zero constant term."""
        return UniPoly([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def monic(self) -> "UniPoly":
        return self * (1 / self.lc)

    def normalized(self) -> "UniPoly":
        """Monic with zero constant term (the linear-equivalence representative)."""
        if self.is_constant():
            raise ValueError("cannot normalize a constant polynomial")
        return (self - self.coeff(0)).monic()

    # comparison / display -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def sort_key(self):
        return (self.degree, self.coeffs[::-1])

    def __repr__(self):
        return f"UniPoly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = "t") -> str:
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c:
                terms.append(_term(c, var, k))
        return _join(terms)


_IDENTITY = (Fraction(0), Fraction(1))


def _lift(x) -> UniPoly:
    return x if isinstance(x, UniPoly) else UniPoly.const(x)


def _term(c: Fraction, var: str, k: int) -> str:
    mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
    if not mono:
        return format_rat(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{format_rat(c)}*{mono}"


def _join(terms: Sequence[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out
