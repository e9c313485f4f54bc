"""Exact element kinds: rationals, tower integers 2^(2^e), formal basis vectors.

Rationals are plain :class:`fractions.Fraction` objects (aliased as ``BigRat``);
they are already reduced, hashable and exact, which is all the counters need.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

BigRat = Fraction

_RAT_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rat(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def rat_arith(op: str, a, b) -> Fraction:
    """Exact field arithmetic; ``op`` is one of add, sub, mul, div.

    Division by zero raises ZeroDivisionError.
    """
    try:
        fn = _RAT_OPS[op]
    except KeyError:
        raise ValueError(f"unknown rational operation {op!r}") from None
    a, b = rat(a), rat(b)
    if op == "div" and b == 0:
        raise ZeroDivisionError("rational division by zero")
    return fn(a, b)


def parse_rat(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        if sep:
            if int(den) == 0:
                raise ZeroDivisionError(f"zero denominator in {text!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None


def format_rat(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class TowerInt:
    """The integer 2^(2^e), stored by its exponent ``e``."""

    e: int

    def __post_init__(self):
        if not isinstance(self.e, int) or self.e < 0:
            raise ValueError("tower exponent must be a natural number")

    def pow2(self, j: int) -> "TowerInt":
        return tower_pow(self, j)

    def value(self, max_e: int = 24) -> int:
        """Evaluate as a Python int; refuses exponents above ``max_e``."""
        if self.e > max_e:
            raise OverflowError(f"T({self.e}) has 2^{self.e} binary digits")
        return 1 << (1 << self.e)

    def __str__(self):
        return f"T({self.e})"


def tower_pow(t: TowerInt, j: int) -> TowerInt:
    """(2^(2^e))^(2^j) = 2^(2^(e+j))."""
    if j < 0:
        raise ValueError("j must be a natural number")
    return TowerInt(t.e + j)


def parse_tower(text: str) -> TowerInt:
    text = text.strip()
    if not (text.startswith("T(") and text.endswith(")")):
        raise ValueError(f"malformed tower integer {text!r}")
    return TowerInt(int(text[2:-1]))


class BasisVector:
    """Integer combination sum m_i * a_i of formally independent a_i.

    Stored as a sorted tuple of (index, coefficient) pairs with no zero
    coefficients, so equality of represented sums is tuple equality.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, coeffs: Union[Mapping[int, int], Iterable[tuple]] = ()):
        if isinstance(coeffs, Mapping):
            coeffs = coeffs.items()
        acc: dict[int, int] = {}
        for i, m in coeffs:
            if i < 0:
                raise ValueError("basis index must be nonnegative")
            acc[i] = acc.get(i, 0) + m
        self._items = tuple(sorted((i, m) for i, m in acc.items() if m))
        self._hash = hash(self._items)

    @classmethod
    def _from_sorted(cls, items: tuple) -> "BasisVector":
        v = cls.__new__(cls)
        v._items = items
        v._hash = hash(items)
        return v

    @classmethod
    def unit(cls, i: int, m: int = 1) -> "BasisVector":
        return cls({i: m})

    def as_dict(self) -> dict[int, int]:
        return dict(self._items)

    @property
    def items(self) -> tuple:
        return self._items

    def is_zero(self) -> bool:
        return not self._items

    def __add__(self, other: "BasisVector") -> "BasisVector":
        return vec_add(self, other)

    def __neg__(self) -> "BasisVector":
        return BasisVector._from_sorted(tuple((i, -m) for i, m in self._items))

    def __eq__(self, other):
        if not isinstance(other, BasisVector):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._items < other._items

    def __repr__(self):
        return f"BasisVector({dict(self._items)})"

    def __str__(self):
        return format_vector(self)


def vec_add(u: BasisVector, v: BasisVector) -> BasisVector:
    a, b = u.items, v.items
    if not a:
        return v
    if not b:
        return u
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ka, kb = a[i][0], b[j][0]
        if ka == kb:
            m = a[i][1] + b[j][1]
            if m:
                out.append((ka, m))
            i += 1
            j += 1
        elif ka < kb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return BasisVector._from_sorted(tuple(out))


def format_vector(v: BasisVector) -> str:
    return ",".join(f"{i}:{m}" for i, m in v.items)


def parse_vector(text: str) -> BasisVector:
    text = text.strip()
    if not text:
        return BasisVector()
    pairs = []
    for part in text.split(","):
        i, sep, m = part.partition(":")
        if not sep:
            raise ValueError(f"malformed basis vector entry {part!r}")
        pairs.append((int(i), int(m)))
    return BasisVector(pairs)


def format_element(x) -> str:
    if isinstance(x, Fraction):
        return format_rat(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, TowerInt):
        return str(x)
    if isinstance(x, BasisVector):
        return format_vector(x)
    raise TypeError(f"not an exact element: {x!r}")


def parse_element(text: str):
    """Parse any exact element; the kind is inferred from the text form."""
    text = text.strip()
    if text.startswith("T("):
        return parse_tower(text)
    if ":" in text or text == "":
        return parse_vector(text)
    return parse_rat(text)


def rational_root(c: Fraction, k: int) -> Optional[Fraction]:
    """Exact rational k-th root of c, or None."""
    if k == 1:
        return c
    if c < 0 and k % 2 == 0:
        return None
    sign = -1 if c < 0 else 1
    num = int_root(abs(c.numerator), k)
    den = int_root(c.denominator, k)
    if num is None or den is None:
        return None
    return sign * Fraction(num, den)


def int_root_floor(n: int, k: int) -> int:
    """floor(n^(1/k)) for n >= 0, k >= 1."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    # integer Newton iteration from an overestimate converges to the floor root
    r = 1 << (n.bit_length() // k + 1)
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if nr >= r:
            return r
        r = nr


def int_root(n: int, k: int) -> Optional[int]:
    """Exact integer k-th root of n >= 0, or None."""
    r = int_root_floor(n, k)
    return r if r ** k == n else None
