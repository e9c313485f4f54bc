"""Finite group actions, incidence and stabilizer statistics, approximate
subgroup certificates, and a popularity/quotient heuristic that extracts an
(H, T, h) triple with small growth from a set with many incidences.
"""

from __future__ import annotations

import itertools
import math
import random
from abc import ABC, abstractmethod
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from expandlab.errors import BudgetExceededError, DegenerateInputError, InvariantViolation
from expandlab.expansion import BoundParams

GROUP = "group"
POINT = "point"

RELATIVE_GUARD = 1e-9


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class GroupAction(ABC):
    """A finite group G acting on a finite set X on the left."""

    name = "action"

    @abstractmethod
    def elements(self) -> list: ...

    @abstractmethod
    def points(self) -> list: ...

    @property
    @abstractmethod
    def identity(self): ...

    @abstractmethod
    def mul(self, g, h): ...

    @abstractmethod
    def inv(self, g): ...

    @abstractmethod
    def act(self, g, x): ...

    def order(self) -> int:
        return len(self.elements())

    def degree(self) -> int:
        return len(self.points())

    def parse_element(self, text: str):
        return int(text)

    def format_element(self, g) -> str:
        return str(g)

    def parse_point(self, text: str):
        return int(text)

    def format_point(self, x) -> str:
        return str(x)

    def check_axioms(self, samples: int = 2000, seed: int = 0) -> None:
        """Group and action axioms, exhaustively on small actions, sampled otherwise."""
        G, X = self.elements(), self.points()
        e = self.identity
        rng = random.Random(seed)
        if len(G) ** 2 * len(X) <= 200_000:
            triples = itertools.product(G, G, X)
        else:
            triples = ((rng.choice(G), rng.choice(G), rng.choice(X)) for _ in range(samples))
        elems = set(G)
        pts = set(X)
        for g, h, x in triples:
            gh = self.mul(g, h)
            if gh not in elems:
                raise InvariantViolation(f"{self.name}: product leaves the group")
            if self.act(gh, x) != self.act(g, self.act(h, x)):
                raise InvariantViolation(f"{self.name}: action is not compatible with products")
            if self.act(g, x) not in pts:
                raise InvariantViolation(f"{self.name}: action leaves the point set")
        for g in G if len(G) <= 5000 else rng.sample(G, samples):
            if self.mul(g, self.inv(g)) != e or self.mul(e, g) != g:
                raise InvariantViolation(f"{self.name}: inverse or identity law fails")
        for x in X:
            if self.act(e, x) != x:
                raise InvariantViolation(f"{self.name}: identity moves a point")


class CyclicAdd(GroupAction):
    """Z/n acting on itself by translation."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.name = f"CyclicAdd({n})"

    def elements(self):
        return list(range(self.n))

    def points(self):
        return list(range(self.n))

    @property
    def identity(self):
        return 0

    def mul(self, g, h):
        return (g + h) % self.n

    def inv(self, g):
        return -g % self.n

    def act(self, g, x):
        return (g + x) % self.n

    def parse_element(self, text):
        return int(text) % self.n

    parse_point = parse_element


class Agl1(GroupAction):
    """Affine maps x -> a*x + b over F_p, stored as (a, b)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.name = f"Agl1({p})"

    def elements(self):
        return [(a, b) for a in range(1, self.p) for b in range(self.p)]

    def points(self):
        return list(range(self.p))

    @property
    def identity(self):
        return (1, 0)

    def mul(self, g, h):
        (a1, b1), (a2, b2) = g, h
        return (a1 * a2 % self.p, (a1 * b2 + b1) % self.p)

    def inv(self, g):
        a, b = g
        ai = pow(a, -1, self.p)
        return (ai, -ai * b % self.p)

    def act(self, g, x):
        a, b = g
        return (a * x + b) % self.p

    def parse_element(self, text):
        a, b = (int(v) % self.p for v in text.split(","))
        if a == 0:
            raise ValueError(f"{text!r} is not invertible")
        return (a, b)

    def format_element(self, g):
        return f"{g[0]},{g[1]}"

    def parse_point(self, text):
        return int(text) % self.p


class Psl2(GroupAction):
    """PSL2(F_p) acting on the projective line by Mobius maps.

    Matrices (a, b, c, d) of determinant 1 are kept modulo -1 by making the
    first nonzero entry lie in 1..(p-1)/2. The point at infinity is ``p``.
    """

    def __init__(self, p: int):
        if not is_prime(p) or p == 2:
            raise ValueError(f"modulus {p} is not an odd prime")
        self.p = p
        self.name = f"Psl2({p})"
        self._elements = None

    def normalize(self, m) -> tuple:
        p = self.p
        m = tuple(v % p for v in m)
        lead = next(v for v in m if v)
        if lead > (p - 1) // 2:
            m = tuple(-v % p for v in m)
        return m

    def elements(self):
        if self._elements is None:
            p = self.p
            out = set()
            for a, b, c in itertools.product(range(p), repeat=3):
                # solve a*d - b*c = 1 for d when a is invertible
                if a:
                    d = (1 + b * c) * pow(a, -1, p) % p
                    out.add(self.normalize((a, b, c, d)))
                elif b * c % p == p - 1:
                    for d in range(p):
                        out.add(self.normalize((a, b, c, d)))
            self._elements = sorted(out)
        return list(self._elements)

    def points(self):
        return list(range(self.p + 1))

    @property
    def identity(self):
        return (1, 0, 0, 1)

    def mul(self, g, h):
        a, b, c, d = g
        e, f, u, v = h
        return self.normalize((a * e + b * u, a * f + b * v, c * e + d * u, c * f + d * v))

    def inv(self, g):
        a, b, c, d = g
        return self.normalize((d, -b, -c, a))

    def act(self, g, x):
        a, b, c, d = g
        p = self.p
        if x == p:
            return p if c == 0 else a * pow(c, -1, p) % p
        den = (c * x + d) % p
        if den == 0:
            return p
        return (a * x + b) * pow(den, -1, p) % p

    def parse_element(self, text):
        m = tuple(int(v) for v in text.replace(",", " ").split())
        if len(m) != 4 or (m[0] * m[3] - m[1] * m[2]) % self.p != 1:
            raise ValueError(f"{text!r} is not a determinant-one matrix")
        return self.normalize(m)

    def format_element(self, g):
        return " ".join(map(str, g))

    def parse_point(self, text):
        text = text.strip()
        return self.p if text in ("inf", "oo") else int(text) % self.p

    def format_point(self, x):
        return "inf" if x == self.p else str(x)


class PermAction(GroupAction):
    """An explicit permutation group on 0..m-1; (g*h)(x) = g(h(x))."""

    def __init__(self, perms: Sequence[Sequence[int]], m: Optional[int] = None):
        perms = [tuple(p) for p in perms]
        if not perms:
            raise ValueError("empty permutation list")
        m = len(perms[0]) if m is None else m
        for p in perms:
            if len(p) != m or sorted(p) != list(range(m)):
                raise ValueError(f"malformed permutation {list(p)}")
        self.m = m
        self._perms = sorted(set(perms))
        self._index = {p: i for i, p in enumerate(perms)}
        self._labels = list(perms)
        self.name = f"PermAction({m}, {len(self._perms)})"
        elems = set(self._perms)
        if self.identity not in elems:
            raise ValueError("permutation list lacks the identity")
        for g in self._perms:
            if self.inv(g) not in elems or any(self.mul(g, h) not in elems for h in self._perms):
                raise ValueError("permutation list is not closed under composition and inverse")

    @classmethod
    def from_file(cls, path) -> "PermAction":
        with open(path) as fh:
            lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        head = lines[0]
        if len(head) != 4 or head[0] != "points" or head[2] != "groupsize":
            raise ValueError(f"{path}: header must read 'points m groupsize g'")
        m, g = int(head[1]), int(head[3])
        rows = [tuple(int(v) for v in ln) for ln in lines[1:]]
        if len(rows) != g:
            raise ValueError(f"{path}: expected {g} permutations, found {len(rows)}")
        return cls(rows, m)

    def elements(self):
        return list(self._perms)

    def points(self):
        return list(range(self.m))

    @property
    def identity(self):
        return tuple(range(self.m))

    def mul(self, g, h):
        return tuple(g[x] for x in h)

    def inv(self, g):
        out = [0] * self.m
        for x, y in enumerate(g):
            out[y] = x
        return tuple(out)

    def act(self, g, x):
        return g[x]

    def parse_element(self, text):
        """Subset files name permutations by their line index in the action file."""
        return self._labels[int(text)]

    def format_element(self, g):
        return str(self._index[g])


def make_action(kind: str, **params) -> GroupAction:
    kind = kind.lower()
    if kind in ("cyclic", "cyclicadd"):
        action = CyclicAdd(int(params["n"]))
    elif kind == "agl1":
        action = Agl1(int(params["p"]))
    elif kind == "psl2":
        action = Psl2(int(params["p"]))
    elif kind in ("perm", "permaction"):
        if "path" in params:
            action = PermAction.from_file(params["path"])
        else:
            action = PermAction(params["perms"])
    else:
        raise ValueError(f"unknown action kind {kind!r}")
    action.check_axioms()
    return action


# --------------------------------------------------------------------------
# subsets


@dataclass(frozen=True)
class ActionSubset:
    role: str
    elements: frozenset
    symmetric: bool = False

    @classmethod
    def group(cls, items: Iterable, symmetric: bool = False) -> "ActionSubset":
        return cls(GROUP, frozenset(items), symmetric)

    @classmethod
    def points(cls, items: Iterable) -> "ActionSubset":
        return cls(POINT, frozenset(items))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    def __contains__(self, x):
        return x in self.elements


def _need(S: ActionSubset, role: str, what: str):
    if S.role != role:
        raise ValueError(f"{what} must be a {role}-side subset, got {S.role}")


def load_subset(action: GroupAction, path, role: str) -> ActionSubset:
    parse = action.parse_element if role == GROUP else action.parse_point
    with open(path) as fh:
        items = [parse(ln.strip()) for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    return ActionSubset(role, frozenset(items))


def inverse_set(action: GroupAction, S: ActionSubset) -> frozenset:
    return frozenset(action.inv(g) for g in S.elements)


def symmetrize(action: GroupAction, S: ActionSubset) -> ActionSubset:
    """S with S^-1 and the identity added, flagged symmetric."""
    _need(S, GROUP, "S")
    return ActionSubset.group(S.elements | inverse_set(action, S) | {action.identity}, symmetric=True)


# --------------------------------------------------------------------------
# incidences and products


def _incidence_chunk(action, s_chunk, a_list, bset) -> int:
    act = action.act
    return sum(1 for s in s_chunk for a in a_list if act(s, a) in bset)


def act_incidence(action: GroupAction, S: ActionSubset, A: ActionSubset, B: ActionSubset, workers: int = 1) -> int:
    """|{(s, a) in S x A : s*a in B}|."""
    _need(S, GROUP, "S")
    _need(A, POINT, "A")
    _need(B, POINT, "B")
    s_list, a_list = sorted(S.elements), sorted(A.elements)
    if workers <= 1 or len(s_list) < 2:
        return _incidence_chunk(action, s_list, a_list, B.elements)
    size = -(-len(s_list) // workers)
    chunks = [s_list[i : i + size] for i in range(0, len(s_list), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_incidence_chunk, [action] * len(chunks), chunks,
                            [a_list] * len(chunks), [B.elements] * len(chunks)))


def product_set(action: GroupAction, S: ActionSubset, k: int, budget: int = 10_000_000) -> ActionSubset:
    """S^k, symmetrizing first unless S is flagged symmetric."""
    _need(S, GROUP, "S")
    if k < 1:
        raise ValueError("k must be >= 1")
    base = S if S.symmetric else symmetrize(action, S)
    gens = sorted(base.elements)
    current = set(gens)
    frontier = set(gens)
    mul = action.mul
    for _ in range(k - 1):
        # S^(j+1) = S^j * S; only new elements can produce new products
        new = set()
        for g in frontier:
            for s in gens:
                x = mul(g, s)
                if x not in current:
                    new.add(x)
        if len(new) * len(gens) > budget:
            raise BudgetExceededError(f"product set exceeded budget {budget}")
        if not new:
            break
        current |= new
        frontier = new
    return ActionSubset.group(current, symmetric=True)


@dataclass(frozen=True)
class GeneratedSet:
    W: ActionSubset
    steps: int
    exact: bool  # True when S^k stabilized, so W is the generated subgroup


def generated_subgroup(action: GroupAction, S: ActionSubset, k: int = 6) -> GeneratedSet:
    """S^k as a stand-in for the generated subgroup, with a fixpoint check."""
    sym = symmetrize(action, S)
    prev = sym
    for j in range(2, k + 2):
        cur = product_set(action, sym, j)
        if len(cur) == len(prev):
            return GeneratedSet(prev, j - 1, True)
        if j == k + 1:
            break
        prev = cur
    return GeneratedSet(prev, k, False)


@dataclass(frozen=True)
class StabReport:
    count: int  # tuples fixed by some non-identity element of W
    histogram: dict  # stabilizer size -> number of tuples
    tuples: int
    n: int
    w_size: int

    def at_least(self, threshold: float) -> int:
        """Tuples whose stabilizer in W has at least ``threshold`` elements."""
        return sum(c for size, c in self.histogram.items() if size >= threshold - RELATIVE_GUARD * threshold)


def stab_count(action: GroupAction, W: ActionSubset, A: ActionSubset, n: int, budget: int = 20_000_000) -> StabReport:
    """Stabilizer sizes in W of all n-tuples from A."""
    _need(W, GROUP, "W")
    _need(A, POINT, "A")
    if n < 1:
        raise ValueError("n must be >= 1")
    a_list = sorted(A.elements)
    tuples = len(a_list) ** n
    if tuples > budget:
        raise BudgetExceededError(f"|A|^n = {tuples} exceeds budget {budget}")
    w_list = sorted(W.elements)
    e = action.identity
    # bit j of fix[a] says w_list[j] fixes a; the identity bit is handled separately
    fix = {a: 0 for a in a_list}
    for j, w in enumerate(w_list):
        if w == e:
            continue
        for a in a_list:
            if action.act(w, a) == a:
                fix[a] |= 1 << j
    has_e = e in W.elements
    everything = (1 << len(w_list)) - 1
    hist: Counter = Counter()
    masks = [fix[a] for a in a_list]

    def walk(depth, mask):
        if depth == n:
            hist[bin(mask).count("1")] += 1
            return
        for m in masks:
            walk(depth + 1, mask & m)

    walk(0, everything if not has_e else everything & ~(1 << w_list.index(e)))
    count = sum(c for size, c in hist.items() if size > 0)
    histogram = {size + has_e: c for size, c in sorted(hist.items())}
    return StabReport(count, histogram, tuples, n, len(w_list))


# --------------------------------------------------------------------------
# approximate subgroups


@dataclass(frozen=True)
class ApproxGroupCert:
    H: ActionSubset
    K: int
    cover: Optional[tuple]
    symmetric: bool
    has_identity: bool
    method: str = ""

    @property
    def ok(self) -> bool:
        return self.symmetric and self.has_identity and self.cover is not None and len(self.cover) <= self.K


def _products(action, X, Y) -> set:
    mul = action.mul
    return {mul(x, y) for x in X for y in Y}


def _cover_order(action, items):
    e = action.identity
    return sorted(items, key=lambda g: (g != e, g))


def verify_approx_subgroup(action: GroupAction, H: ActionSubset, K: int, search_budget: int = 2_000_000) -> ApproxGroupCert:
    """Check H = H^-1, 1 in H, and look for at most K left translates of H covering H*H.

    A greedy cover is tried first; if it needs more than K translates an exact
    depth-limited search follows (each uncovered element u forces a
    translate x in u*H).
    """
    _need(H, GROUP, "H")
    if not H.elements:
        raise DegenerateInputError("H is empty")
    symmetric = inverse_set(action, H) == H.elements
    has_identity = action.identity in H.elements
    if not symmetric:
        return ApproxGroupCert(H, K, None, False, has_identity, "precondition")
    h_list = sorted(H.elements)
    HH = _products(action, h_list, h_list)
    index = {g: i for i, g in enumerate(_cover_order(action, HH))}
    full = (1 << len(index)) - 1
    mask_memo: dict = {}

    def mask(x):
        m = mask_memo.get(x)
        if m is None:
            m = 0
            for h in h_list:
                i = index.get(action.mul(x, h))
                if i is not None:
                    m |= 1 << i
            mask_memo[x] = m
        return m

    # greedy over candidates in H*H, identity first on ties
    cover, covered = [], 0
    candidates = list(index)
    while covered != full:
        best = max(candidates, key=lambda x: (bin(mask(x) & ~covered).count("1"), -index[x]))
        cover.append(best)
        covered |= mask(best)
    if len(cover) <= K:
        return ApproxGroupCert(H, K, tuple(cover), True, has_identity, "greedy")

    order = list(index)
    h_inv = [action.inv(h) for h in h_list]
    nodes = [0]

    def search(covered, chosen):
        if covered == full:
            return list(chosen)
        if len(chosen) == K:
            return None
        nodes[0] += 1
        if nodes[0] > search_budget:
            raise BudgetExceededError("cover search budget exhausted")
        low = (~covered & full) & -(~covered & full)
        u = order[low.bit_length() - 1]
        for x in _cover_order(action, {action.mul(u, hi) for hi in h_inv}):
            found = search(covered | mask(x), chosen + [x])
            if found is not None:
                return found
        return None

    try:
        found = search(0, [])
    except BudgetExceededError:
        found = None
    if found is not None:
        return ApproxGroupCert(H, K, tuple(found), True, has_identity, "search")
    return ApproxGroupCert(H, K, tuple(cover), True, has_identity, "greedy")


# --------------------------------------------------------------------------
# extraction


@dataclass(frozen=True)
class BsgStats:
    H: int
    T: int
    H_cap_hS: int
    HT: int
    incidences: int


@dataclass(frozen=True)
class BsgResult:
    H: ActionSubset
    T: ActionSubset
    h: object
    stats: BsgStats
    delta_star: float
    choice: dict = field(default_factory=dict)


def compute_stats(action, H: ActionSubset, T: ActionSubset, h, S: ActionSubset, A: ActionSubset) -> BsgStats:
    hS = {action.mul(h, s) for s in S.elements}
    HT = {action.act(g, a) for g in H.elements for a in T.elements}
    inc = act_incidence(action, S, A, A)
    return BsgStats(len(H), len(T), len(H.elements & hS), len(HT), inc)


def certificate_delta(stats: BsgStats, a_size: int, s_size: int, n: int, t: float) -> float:
    """Smallest delta >= 0 for which all four size inequalities hold."""
    if a_size < 2:
        return 0.0 if stats.H_cap_hS else math.inf
    L = math.log(a_size)
    if stats.H_cap_hS == 0 or stats.T == 0:
        return math.inf
    need = (
        math.log(stats.H) / L - n - t,
        1 - math.log(stats.T) / L,
        math.log(stats.HT) / L - 1,
        (math.log(s_size) - math.log(stats.H_cap_hS)) / L,
    )
    return max(0.0, *need)


def _geometric(upto: int) -> list:
    out, q = [], 1
    while q < upto:
        out.append(q)
        q *= 2
    out.append(upto)
    return sorted(set(out))


def bsg_extract(action: GroupAction, S: ActionSubset, A: ActionSubset, params: BoundParams = None,
                max_pairs: int = 20_000, quantiles: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 0.9)) -> BsgResult:
    """Popularity/quotient heuristic for a small-growth certificate.

    S is ranked by |{a in A : s*a in A}|. For several cut-offs q the quotients
    s1^-1 * s2 of the q top elements form E (at most ``max_pairs`` pairs), and
    H = (E u {1} u E^-1)^3. T keeps the points of A whose degree reaches a
    quantile of the degree distribution, and h is the top-ranked element of S.
    The (q, quantile) pair with the smallest certificate delta is returned.
    """
    _need(S, GROUP, "S")
    _need(A, POINT, "A")
    params = params or BoundParams(n=1, t=0.0)
    aset = A.elements
    s_list = sorted(S.elements)
    a_list = sorted(aset)
    s_deg = {s: sum(1 for a in a_list if action.act(s, a) in aset) for s in s_list}
    incidences = sum(s_deg.values())
    if incidences == 0:
        raise DegenerateInputError("S has no incidences with A")
    ranked = sorted(s_list, key=lambda s: (-s_deg[s], s))
    h = ranked[0]
    hS = {action.mul(h, s) for s in s_list}
    a_deg = {a: 0 for a in a_list}
    for s in s_list:
        for a in a_list:
            if action.act(s, a) in aset:
                a_deg[a] += 1
    degrees = sorted(a_deg.values())
    thresholds = sorted({degrees[min(len(degrees) - 1, int(q * len(degrees)))] for q in quantiles})
    T_options = []
    for thr in thresholds:
        T = frozenset(a for a in a_list if a_deg[a] >= thr)
        if T and all(T != prev for _, prev in T_options):
            T_options.append((thr, T))

    N, n, t = len(a_list), params.n, params.t
    L = math.log(N) if N > 1 else 1.0
    best = None
    seen_H = set()
    for q in _geometric(len(ranked)):
        top = ranked[:q]
        E = set()
        for s1, s2 in itertools.islice(itertools.permutations(top, 2), max_pairs):
            E.add(action.mul(action.inv(s1), s2))
        H = product_set(action, ActionSubset.group(E), 3)
        if H.elements in seen_H:
            continue
        seen_H.add(H.elements)
        cap = len(H.elements & hS)
        if cap == 0:
            continue
        for thr, T in T_options:
            cheap = max(0.0, math.log(len(H)) / L - n - t, 1 - math.log(len(T)) / L,
                        (math.log(len(s_list)) - math.log(cap)) / L)
            if best is not None and cheap >= best[0]:
                continue
            HT = len({action.act(g, a) for g in H.elements for a in T})
            stats = BsgStats(len(H), len(T), cap, HT, incidences)
            d = certificate_delta(stats, N, len(s_list), n, t)
            if best is None or d < best[0]:
                best = (d, H, T, {"q": q, "threshold": thr})
    if best is None:
        raise DegenerateInputError("no candidate H meets h*S")
    d, H, T, choice = best
    T_set = ActionSubset.points(T)
    stats = compute_stats(action, H, T_set, h, S, A)
    if stats.incidences != incidences:
        raise InvariantViolation("incidence recount disagrees with the search")
    return BsgResult(H, T_set, h, stats, certificate_delta(stats, N, len(s_list), n, t), choice)


@dataclass(frozen=True)
class BsgVerdict:
    ok: bool
    report: dict


def _le(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1 + RELATIVE_GUARD)


def _ge(lhs: float, rhs: float) -> bool:
    return lhs >= rhs * (1 - RELATIVE_GUARD)


def verify_bsg(action: GroupAction, result: BsgResult, A: ActionSubset, S: ActionSubset,
               delta: float, n: int, t: float) -> BsgVerdict:
    """Recompute every cardinality from raw sets and test the four inequalities."""
    if not result.T.elements <= A.elements:
        return BsgVerdict(False, {"T_subset_A": False})
    stats = compute_stats(action, result.H, result.T, result.h, S, A)
    N = len(A)
    report = {
        "T_subset_A": True,
        "H_small": _le(stats.H, N ** (n + t + delta)),
        "T_large": _ge(stats.T, N ** (1 - delta)),
        "non_expansion": _le(stats.HT, N ** (1 + delta)),
        "meets_hS": _ge(stats.H_cap_hS, N ** (-delta) * len(S)),
        "stats": stats,
    }
    ok = all(v for k, v in report.items() if k != "stats")
    return BsgVerdict(ok, report)


# --------------------------------------------------------------------------
# exhaustive oracle for small cyclic groups


def interval_oracle(action: CyclicAdd, S: ActionSubset, A: ActionSubset, n: int = 1, t: float = 0.0) -> tuple:
    """Best certificate delta over H = H'^3 with H' a symmetric interval, T an
    interval inside A and every h in the group. Returns (delta, H, T, h)."""
    if not isinstance(action, CyclicAdd):
        raise TypeError("interval oracle needs a cyclic action")
    m = action.n
    a_sorted = sorted(A.elements)
    aset = A.elements
    T_options = []
    for i in range(m):
        for length in range(1, m + 1):
            T = frozenset((i + j) % m for j in range(length))
            if T <= aset and T not in T_options:
                T_options.append(T)
    incidences = act_incidence(action, S, A, A)
    best = (math.inf, None, None, None)
    seen = set()
    for r in range(m // 2 + 1):
        Hp = ActionSubset.group({j % m for j in range(-r, r + 1)}, symmetric=True)
        H = product_set(action, Hp, 3)
        if H.elements in seen:
            continue
        seen.add(H.elements)
        for T in T_options:
            HT = len({(g + a) % m for g in H.elements for a in T})
            for h in range(m):
                cap = len(H.elements & {(h + s) % m for s in S.elements})
                stats = BsgStats(len(H), len(T), cap, HT, incidences)
                d = certificate_delta(stats, len(a_sorted), len(S), n, t)
                if d < best[0]:
                    best = (d, H, T, h)
    return best
