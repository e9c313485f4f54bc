"""Detection of additive g(h(x) + s(y)) and multiplicative g(h(x) * s(y)) forms.

:func:`detect_addmul` specializes the y-block at a point where f keeps its full
x-degree, takes the unique normalized inner factor h0 of each degree from the
specialized univariate polynomial, expands f in powers of h0 and reads the
witness off the coefficients. Every witness is confirmed by recomposition.

:func:`addmul_by_splits` is an independent solver for bidegree <= 3 in (x, y0):
it enumerates degree splits and solves the coefficient identities directly.
It exists to cross-check the detector.

Normal forms: h is monic; for the additive kind h and s have zero constant
term; for the multiplicative kind s has leading coefficient 1 in graded
lexicographic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from expandlab.errors import DegenerateInputError
from expandlab.exactnum import rational_root
from expandlab.polyalg.decompose import divisors, left_component, right_component
from expandlab.polyalg.multipoly import MultiPoly
from expandlab.polyalg.unipoly import UniPoly

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
NONE = "none"


@dataclass(frozen=True)
class AddMulForm:
    kind: str
    g: Optional[UniPoly] = None
    h: Optional[UniPoly] = None
    s: Optional[MultiPoly] = None

    def __bool__(self):
        return self.kind != NONE

    def recompose(self, variables) -> MultiPoly:
        """Rebuild g(h(x) + s) or g(h(x) * s) over ``variables``."""
        if self.kind == NONE:
            raise ValueError("no witness to recompose")
        hx = MultiPoly.from_uni(self.h, variables[0], variables)
        sy = self.s.rename(variables)
        inner = hx + sy if self.kind == ADDITIVE else hx * sy
        return _apply_uni(self.g, inner)

    def describe(self) -> str:
        if self.kind == NONE:
            return "none"
        op = "+" if self.kind == ADDITIVE else "*"
        return f"{self.kind}: g = {self.g}, h = {self.h.to_text('x')}, s = {self.s}  [g(h {op} s)]"


def _apply_uni(g: UniPoly, inner: MultiPoly) -> MultiPoly:
    acc = MultiPoly.zero(inner.variables)
    for c in reversed(g.coeffs):
        acc = acc * inner + c
    return acc


def _check_nondegenerate(f: MultiPoly):
    if f.arity < 2:
        raise DegenerateInputError("need at least one y variable")
    if not f.depends_on(0):
        raise DegenerateInputError("polynomial is constant in x")
    if not any(f.depends_on(i) for i in range(1, f.arity)):
        raise DegenerateInputError("polynomial does not depend on the y variables")


# --------------------------------------------------------------------------
# multivariate helpers


def _lead(p: MultiPoly):
    return p.leading_term()


def poly_root(p: MultiPoly, k: int, max_terms: int = 10_000) -> Optional[MultiPoly]:
    """Exact k-th root of ``p`` over the rationals, or None.

    Terms are peeled off in graded lexicographic order: the leading term of
    p - s^k, divided by k * lt(s)^(k-1), is the next term of s.
    """
    if k == 1:
        return p
    if p.is_zero():
        return p
    e, c = _lead(p)
    if any(x % k for x in e):
        return None
    lc = rational_root(c, k)
    if lc is None:
        return None
    vs = p.variables
    lead_e = tuple(x // k for x in e)
    s = MultiPoly({lead_e: lc}, vs)
    denom = k * lc ** (k - 1)
    shift = tuple((k - 1) * x for x in lead_e)
    for _ in range(max_terms):
        r = p - s ** k
        if r.is_zero():
            return s
        er, cr = _lead(r)
        ne = tuple(a - b for a, b in zip(er, shift))
        if min(ne) < 0 or (sum(ne), ne) >= (sum(lead_e), lead_e):
            return None
        s = s + MultiPoly({ne: cr / denom}, vs)
    return None


def _x_coefficients(f: MultiPoly) -> list:
    """f as a list over powers of x of MultiPolys in the y variables."""
    parts = f.coefficients_in(0)
    ys = f.variables[1:]
    deg = max(parts)
    return [parts.get(k, MultiPoly.zero(ys)) for k in range(deg + 1)]


def _expand_in_base(coeffs: list, h0: UniPoly) -> Optional[list]:
    """Write sum_k coeffs[k] x^k as sum_j d_j h0(x)^j with d_j free of x.

    ``h0`` is monic. Returns the digits d_j or None when some remainder
    still involves x.
    """
    e = h0.degree
    digits = []
    cur = list(coeffs)
    while cur and any(not c.is_zero() for c in cur):
        while cur and cur[-1].is_zero():
            cur.pop()
        n = len(cur) - 1
        if n < e:
            if any(not c.is_zero() for c in cur[1:]):
                return None
            digits.append(cur[0])
            break
        q = [None] * (n - e + 1)
        rem = list(cur)
        for k in range(n - e, -1, -1):
            c = rem[k + e]
            q[k] = c
            if not c.is_zero():
                for j, hj in enumerate(h0.coeffs):
                    if hj:
                        rem[k + j] = rem[k + j] - c * hj
        if any(not rem[i].is_zero() for i in range(1, e)):
            return None
        digits.append(rem[0])
        cur = q
    return digits


def _specialization_point(lead: MultiPoly) -> tuple:
    """A small integer point where the nonzero polynomial ``lead`` does not vanish."""
    m = lead.arity
    bound = max(lead.total_degree(), 0) + 1
    for pt in itertools.product(range(bound + 1), repeat=m):
        if lead(*pt) != 0:
            return pt
    raise AssertionError("nonzero polynomial vanished on a full grid")


def _try_additive(f, digits, h0) -> Optional[AddMulForm]:
    K = len(digits) - 1
    top = digits[K]
    if not top.is_constant() or K < 1:
        return None
    gK = top.constant_term()
    sub = digits[K - 1]
    s = (sub - sub.constant_term()) * (1 / (K * gK))
    if s.is_zero():
        return None
    g = UniPoly(d.constant_term() for d in digits)
    form = AddMulForm(ADDITIVE, g, h0, s)
    return form if form.recompose(f.variables) == f else None


def _try_multiplicative(f, digits, h0) -> Optional[AddMulForm]:
    K = len(digits) - 1
    if K < 1:
        return None
    top = digits[K]
    lead_e, lead_c = _lead(top)
    if not any(lead_e):
        return None
    beta = digits[K - 1].terms.get(lead_e, Fraction(0)) / (K * lead_c)
    # coefficients of F(t - beta, y)
    shifted = []
    for k in range(K + 1):
        acc = MultiPoly.zero(top.variables)
        for j in range(k, K + 1):
            if not digits[j].is_zero():
                acc = acc + digits[j] * (comb(j, k) * (-beta) ** (j - k))
        shifted.append(acc)
    s = poly_root(shifted[K] * (1 / lead_c), K)
    if s is None or s.is_constant():
        return None
    s_lc = _lead(s)[1]
    if s_lc != 1:
        s = s * (1 / s_lc)
    g = []
    spow = MultiPoly.const(1, s.variables)
    for k in range(K + 1):
        c = shifted[k]
        if c.is_zero():
            g.append(Fraction(0))
        else:
            gk = c.terms.get(_lead(spow)[0], Fraction(0))
            if c != spow * gk:
                return None
            g.append(gk)
        spow = spow * s
    form = AddMulForm(MULTIPLICATIVE, UniPoly(g), h0 + beta, s)
    return form if form.recompose(f.variables) == f else None


def detect_addmul(f: MultiPoly) -> AddMulForm:
    """Find an additive or multiplicative witness for f(x, y0, ..., y_{m-1}).

    Among witnesses the one with the smallest deg h is returned (additive
    preferred at equal degree). Raises DegenerateInputError when f is
    constant in x or independent of the y block.
    """
    _check_nondegenerate(f)
    coeffs = _x_coefficients(f)
    dx = len(coeffs) - 1
    point = _specialization_point(coeffs[dx])
    p = UniPoly(c(*point) for c in coeffs)
    for e in divisors(dx):
        h0 = right_component(p, e)
        if left_component(p, h0) is None:
            continue
        digits = _expand_in_base(coeffs, h0)
        if digits is None:
            continue
        form = _try_additive(f, digits, h0) or _try_multiplicative(f, digits, h0)
        if form:
            return form
    return AddMulForm(NONE)


# --------------------------------------------------------------------------
# brute-force cross-check


def addmul_by_splits(f: MultiPoly) -> AddMulForm:
    """Solve the additive/multiplicative coefficient identities split by split.

    Only for f in (x, y0) with deg_x, deg_y0 <= 3, where every split with
    deg g >= 2 forces linear h and s.
    """
    if f.arity != 2:
        raise ValueError("split solver handles f(x, y0) only")
    _check_nondegenerate(f)
    dx, dy = f.degree_in(0), f.degree_in(1)
    if dx > 3 or dy > 3:
        raise ValueError("split solver handles bidegree <= 3 only")
    M = [[f.terms.get((i, j), Fraction(0)) for j in range(dy + 1)] for i in range(dx + 1)]
    common = [a for a in range(1, min(dx, dy) + 1) if dx % a == 0 and dy % a == 0]
    for a in sorted(common, reverse=True):
        for solver in (_split_additive, _split_multiplicative):
            form = solver(M, dx, dy, a)
            if form is not None and form.recompose(f.variables) == f:
                return form
    return AddMulForm(NONE)


def _split_additive(M, dx, dy, a):
    ys = ("y0",)
    if a == 1:
        if any(M[i][j] for i in range(1, dx + 1) for j in range(1, dy + 1)):
            return None
        lead = M[dx][0]
        h = UniPoly([0] + [M[i][0] / lead for i in range(1, dx + 1)])
        s = MultiPoly({(j,): M[0][j] / lead for j in range(1, dy + 1)}, ys)
        return AddMulForm(ADDITIVE, UniPoly([M[0][0], lead]), h, s)
    # a = dx = dy, h = x, s = sigma*y
    ga = M[a][0]
    if not ga:
        return None
    sigma = M[a - 1][1] / (a * ga)
    g = UniPoly(M[k][0] for k in range(a + 1))
    return AddMulForm(ADDITIVE, g, UniPoly([0, 1]), MultiPoly({(1,): sigma}, ys))


def _split_multiplicative(M, dx, dy, a):
    ys = ("y0",)
    if a == 1:
        g0 = None
        for i in range(1, dx + 1):
            for j in range(1, dy + 1):
                if M[i][j]:
                    g0 = M[0][0] - M[i][0] * M[0][j] / M[i][j]
                    break
            if g0 is not None:
                break
        if g0 is None:
            return None
        N = [row[:] for row in M]
        N[0][0] -= g0
        pi, pj = dx, dy
        if not N[pi][pj]:
            return None
        for i in range(dx + 1):
            for j in range(dy + 1):
                if N[i][j] * N[pi][pj] != N[i][pj] * N[pi][j]:
                    return None
        g1 = N[dx][dy]
        h = UniPoly(N[i][dy] / g1 for i in range(dx + 1))
        s = MultiPoly({(j,): N[dx][j] / g1 for j in range(dy + 1)}, ys)
        return AddMulForm(MULTIPLICATIVE, UniPoly([g0, g1]), h, s)
    ga = M[a][a]
    if not ga:
        return None
    beta = M[a - 1][a] / (a * ga)
    tau = M[a][a - 1] / (a * ga)
    g = [Fraction(0)] * (a + 1)
    for k in range(a, -1, -1):
        acc = M[k][k]
        for j in range(k + 1, a + 1):
            acc -= g[j] * comb(j, k) ** 2 * (beta * tau) ** (j - k)
        g[k] = acc
    return AddMulForm(
        MULTIPLICATIVE, UniPoly(g), UniPoly([beta, 1]), MultiPoly({(1,): 1, (0,): tau}, ys)
    )
