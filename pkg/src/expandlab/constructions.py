"""Structured inputs: progressions, translate/scaling families, the span example
built from independent basis directions, and the tower counterexample."""

from __future__ import annotations

from dataclasses import dataclass

from expandlab.errors import BudgetExceededError
from expandlab.exactnum import BasisVector, TowerInt, int_root_floor, rat, vec_add
from expandlab.expansion import TOWER, VECTOR, FiniteSet, PowerMap, coarse_dim, image_set
from expandlab.polyalg.family import ADDITIVE, MULTIPLICATIVE, PolyFamily
from expandlab.polyalg.unipoly import UniPoly

DEFAULT_BUDGET = 5_000_000


def gen_ap(start, step, n: int) -> FiniteSet:
    """{start + k*step : 0 <= k < n}."""
    start, step = rat(start), rat(step)
    if step == 0:
        raise ValueError("progression step must be nonzero")
    if n < 1:
        raise ValueError("n must be >= 1")
    return FiniteSet.of((start + k * step for k in range(n)), "rational")


def gen_gp(start, ratio, n: int) -> FiniteSet:
    """{start * ratio^k : 0 <= k < n}."""
    start, ratio = rat(start), rat(ratio)
    if start == 0:
        raise ValueError("progression start must be nonzero")
    if ratio in (0, 1, -1):
        raise ValueError(f"degenerate ratio {ratio}")
    if n < 1:
        raise ValueError("n must be >= 1")
    return FiniteSet.of((start * ratio ** k for k in range(n)), "rational")


def gen_structured_family(kind: str, g: UniPoly, h: UniPoly, params) -> PolyFamily:
    """{h(g(t) + a)} or {h(g(t) * a)} for a in params, in sorted parameter order."""
    if g.is_constant() or h.is_constant():
        raise ValueError("g and h must be nonconstant")
    if kind not in (ADDITIVE, MULTIPLICATIVE):
        raise ValueError(f"unknown family kind {kind!r}")
    values = params.sorted() if isinstance(params, FiniteSet) else sorted({rat(a) for a in params})
    if kind == MULTIPLICATIVE and 0 in values:
        raise ValueError("scaling parameter 0 collapses the family")
    members = []
    for a in values:
        inner = g + a if kind == ADDITIVE else g * a
        members.append(h.compose(inner))
    return PolyFamily(tuple(members))


# --------------------------------------------------------------------------
# span example


@dataclass(frozen=True)
class SpanInstance:
    N: int
    n_N: int
    bounds: tuple  # L_i = floor(N^(2^-i)) for i < n_N

    @property
    def size(self) -> int:
        return sum(2 * L + 1 for L in self.bounds) - (self.n_N - 1)

    def elements(self) -> FiniteSet:
        items = {BasisVector()}
        for i, L in enumerate(self.bounds):
            items.update(BasisVector.unit(i, m) for m in range(-L, L + 1) if m)
        return FiniteSet(VECTOR, frozenset(items))

    def describe(self) -> str:
        return f"span(N={self.N}): directions={self.n_N}, bounds={list(self.bounds)}"


def gen_span(N: int) -> SpanInstance:
    if N < 4:
        raise ValueError("N must be >= 4")
    n_N = (N.bit_length() - 1).bit_length() - 1  # floor(log2 floor(log2 N))
    bounds = tuple(int_root_floor(N, 1 << i) for i in range(n_N))
    return SpanInstance(N, n_N, bounds)


def _count_boxes(bounds: tuple, k: int) -> int:
    """Points of the k-fold sumset.

    A vector with coordinates m_i is a sum of k elements of S (each a multiple
    of one direction, zero allowed) iff sum_i ceil(|m_i| / L_i) <= k. The count
    is a convolution over directions of the per-coordinate weights: one value
    needs 0 summands, and 2L values need exactly j >= 1.
    """
    ways = [1] + [0] * k
    for L in bounds:
        w = [1] + [2 * L] * k
        ways = [sum(ways[a] * w[b - a] for a in range(b + 1)) for b in range(k + 1)]
    return sum(ways)


def _count_enumerate(S: FiniteSet, k: int, budget: int) -> int:
    base = list(S.elements)
    current = set(base)
    for _ in range(k - 1):
        nxt = set()
        for u in current:
            for v in base:
                nxt.add(vec_add(u, v))
            if len(nxt) > budget:
                raise BudgetExceededError(f"sumset exceeded {budget} elements")
        current = nxt
    return len(current)


def span_iterated_sumset(inst: SpanInstance, k: int, method: str = "auto", budget: int = DEFAULT_BUDGET):
    """(|S + ... + S| with k summands, its coarse dimension at scale N).

    ``boxes`` counts by the closed description of the sumset; ``enumerate``
    builds it element by element and respects ``budget``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if method in ("auto", "boxes"):
        size = _count_boxes(inst.bounds, k)
    elif method == "enumerate":
        if k * inst.size > budget:
            raise BudgetExceededError(f"k*|S| = {k * inst.size} exceeds budget {budget}")
        size = _count_enumerate(inst.elements(), k, budget)
    else:
        raise ValueError(f"unknown sumset method {method!r}")
    return size, coarse_dim(size, inst.N)


def span_limit(k: int) -> float:
    """Large-N value 2 - 2^-(k-1) of the k-fold coarse dimension."""
    return 2 - 2.0 ** -(k - 1)


# --------------------------------------------------------------------------
# tower counterexample


@dataclass(frozen=True)
class CounterexampleInstance:
    n: int
    exponents: tuple  # 2^i for 0 < i <= n
    A: FiniteSet

    @property
    def family(self) -> list:
        return [PowerMap(i) for i in range(1, self.n + 1)]

    def image(self) -> set:
        return image_set(self.family, self.A)

    def image_values(self, max_e: int = 12) -> set:
        """The image as big integers, evaluated directly; only for small n."""
        return {pow(a.value(max_e), d) for a in self.A.elements for d in self.exponents}


def gen_counterexample(n: int) -> CounterexampleInstance:
    if n < 1:
        raise ValueError("n must be >= 1")
    A = FiniteSet(TOWER, frozenset(TowerInt(i) for i in range(n + 1)))
    return CounterexampleInstance(n, tuple(1 << i for i in range(1, n + 1)), A)
