"""Finite polynomial families and their translation / scaling classes.

An additive class is a set of members outer(inner(t) + a); a multiplicative
class is a set of members outer(inner(t) * a). Classes returned by
:func:`classify_family` partition the family: the globally largest class is
taken first, the rest greedily in member order, each time choosing the
largest class through the first unassigned member.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

from expandlab.exactnum import rational_root
from expandlab.polyalg.decompose import divisors, left_component, right_component
from expandlab.polyalg.unipoly import UniPoly

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"

_T = UniPoly.t()


@dataclass(frozen=True)
class PolyFamily:
    members: tuple
    d: Optional[int] = None

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if any(p.is_constant() for p in members):
            raise ValueError("family members must be nonconstant")
        bound = max((p.degree for p in members), default=0)
        if self.d is None:
            object.__setattr__(self, "d", bound)
        elif bound > self.d:
            raise ValueError(f"member of degree {bound} exceeds degree bound {self.d}")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]


@dataclass(frozen=True)
class FamilyClass:
    kind: str
    inner: UniPoly
    outer: UniPoly
    members: tuple  # (family index, parameter a)

    def __len__(self):
        return len(self.members)

    @property
    def indices(self) -> tuple:
        return tuple(i for i, _ in self.members)

    def rebuild(self, a) -> UniPoly:
        arg = self.inner + a if self.kind == ADDITIVE else self.inner * a
        return self.outer.compose(arg)


@dataclass(frozen=True)
class EpsVerdict:
    eps_additive: bool
    eps_multiplicative: bool
    witness: Optional[FamilyClass]
    largest_additive: int
    largest_multiplicative: int


def _decompositions(f: UniPoly):
    """(e, normalized inner, outer) for every inner degree e | deg f, trivial ones included."""
    out = []
    for e in divisors(f.degree):
        inner = right_component(f, e)
        outer = left_component(f, inner)
        if outer is not None:
            out.append((e, inner, outer))
    return out


def _lonely(family: PolyFamily) -> set:
    """Indices of members whose degree no other member shares.

    Class members share their degree, so these are singletons in either kind
    and need no decomposition work (which matters for huge degrees).
    """
    counts = Counter(p.degree for p in family)
    return {i for i, p in enumerate(family) if counts[p.degree] == 1}


def _center(p: UniPoly) -> Fraction:
    """c with p(u - c) free of the u^(D-1) term."""
    D = p.degree
    return p.coeff(D - 1) / (D * p.lc)


# --------------------------------------------------------------------------
# additive


def _classify_additive(family: PolyFamily) -> list:
    groups: dict = {}
    order = []
    lonely = _lonely(family)
    for i, f in enumerate(family):
        if i in lonely:
            key = (_T, f)
            groups[key] = [(i, Fraction(0))]
            order.append(key)
            continue
        for e, inner, outer in _decompositions(f):
            a = _center(outer)
            key = (inner, outer.shift(-a))
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append((i, a))

    assigned = set()
    heap = [(-len(groups[k]), min(i for i, _ in groups[k]), n) for n, k in enumerate(order)]
    heapq.heapify(heap)
    classes = []
    while heap:
        neg, first, n = heapq.heappop(heap)
        key = order[n]
        live = [(i, a) for i, a in groups[key] if i not in assigned]
        if not live:
            continue
        if len(live) != -neg:
            heapq.heappush(heap, (-len(live), live[0][0], n))
            continue
        inner, outer = key
        classes.append(FamilyClass(ADDITIVE, inner, outer, tuple(live)))
        assigned.update(i for i, _ in live)
    return classes


# --------------------------------------------------------------------------
# multiplicative


class _Bucket:
    """Members whose outer parts are P0(r*u + b) for one centered P0.

    Members i and j lie in a common scaling class with inner + mu exactly
    when z_i(mu) = b_i - r_i*mu and z_j(mu) agree (up to sign if P0 is even).
    """

    def __init__(self, inner: UniPoly, p0: UniPoly):
        self.inner = inner
        self.p0 = p0
        self.even = p0 is not None and all(c == 0 for k, c in enumerate(p0.coeffs) if k % 2)
        self.members = []  # (family index, r, b, outer)

    def finalize(self):
        den = 1
        for _, r, b, _ in self.members:
            for x in (r, b):
                den = den * x.denominator // gcd(den, x.denominator)
        self.den = den
        self.R = {i: int(r * den) for i, r, _, _ in self.members}
        self.B = {i: int(b * den) for i, _, b, _ in self.members}
        self.info = {i: (r, b, o) for i, r, b, o in self.members}

    def _key(self, i, num, den):
        """Reduced (mu, z_i(mu)) as integer tuples; z is scaled by self.den."""
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        num, den = num // g, den // g
        zn = self.B[i] * den - self.R[i] * num
        if self.even:
            zn = abs(zn)
        g = gcd(zn, den)
        return (num, den, zn // g, den // g)

    def best_through(self, i, allowed) -> tuple:
        """(size, mu) of the largest scaling class through member i."""
        counts: dict = defaultdict(set)
        always = 0
        Ri, Bi = self.R[i], self.B[i]
        for j in allowed:
            if j == i:
                continue
            Rj, Bj = self.R[j], self.B[j]
            if Rj == Ri:
                if Bj == Bi:
                    always += 1
                    continue
            else:
                counts[self._key(i, Bi - Bj, Ri - Rj)].add(j)
            if self.even:
                counts[self._key(i, Bi + Bj, Ri + Rj)].add(j)
        if not counts:
            return 1 + always, Fraction(0)
        key = max(counts, key=lambda k: (len(counts[k]), -k[1], -abs(k[0])))
        return 1 + always + len(counts[key]), Fraction(key[0], key[1])

    def members_at(self, i, mu: Fraction, allowed) -> list:
        zi = self.info[i][1] - self.info[i][0] * mu
        out = []
        for j in allowed:
            zj = self.info[j][1] - self.info[j][0] * mu
            if zj == zi or (self.even and zj == -zi):
                out.append(j)
        return sorted(out)

    def make_class(self, idx: list, mu: Fraction) -> FamilyClass:
        first = idx[0]
        rf, bf, of = self.info[first]
        zf = bf - rf * mu
        outer = of.shift(-mu)
        params = []
        for j in idx:
            rj, bj, _ = self.info[j]
            zj = bj - rj * mu
            a = rj / rf if zj == zf else -rj / rf
            params.append((j, a))
        return FamilyClass(MULTIPLICATIVE, self.inner + mu, outer, tuple(params))


def _build_buckets(family: PolyFamily) -> list:
    by_inner: dict = defaultdict(list)
    lonely = _lonely(family)
    buckets = []
    for i in sorted(lonely):
        bucket = _Bucket(_T, None)
        bucket.members.append((i, Fraction(1), Fraction(0), family[i]))
        buckets.append(bucket)
    for i, f in enumerate(family):
        if i in lonely:
            continue
        for e, inner, outer in _decompositions(f):
            by_inner[inner].append((i, outer))

    for inner, items in by_inner.items():
        by_invariant: dict = defaultdict(list)
        for i, outer in items:
            c = _center(outer)
            q = outer.shift(-c)
            D = q.degree
            inv = (D,) + tuple(q.coeff(k) ** D / q.lc ** k for k in range(D + 1))
            by_invariant[inv].append((i, outer, c, q))
        for group in by_invariant.values():
            local = []
            for i, outer, c, q in group:
                for bucket in local:
                    r = _scale_between(bucket.p0, q)
                    if r is not None:
                        bucket.members.append((i, r, r * c, outer))
                        break
                else:
                    bucket = _Bucket(inner, q)
                    bucket.members.append((i, Fraction(1), c, outer))
                    local.append(bucket)
            buckets.extend(local)
    for b in buckets:
        b.finalize()
    return buckets


def _scale_between(p0: UniPoly, q: UniPoly) -> Optional[Fraction]:
    """Rational r with q(v) == p0(r*v), preferring r > 0; None if none exists."""
    if q.degree != p0.degree:
        return None
    D = q.degree
    ratio = q.lc / p0.lc
    root = rational_root(abs(ratio), D)
    if root is None:
        return None
    for r in (root, -root):
        if r ** D == ratio and all(q.coeff(k) == p0.coeff(k) * r ** k for k in range(D + 1)):
            return r
    return None


def _classify_multiplicative(family: PolyFamily) -> list:
    buckets = _build_buckets(family)
    where: dict = defaultdict(list)
    for b in buckets:
        for i in b.R:
            where[i].append(b)

    unassigned = set(range(len(family)))
    classes = []

    def take(bucket, i, mu):
        allowed = [j for j in bucket.R if j in unassigned]
        idx = bucket.members_at(i, mu, allowed)
        classes.append(bucket.make_class(idx, mu))
        unassigned.difference_update(idx)

    best = None
    for bucket in buckets:
        ids = sorted(bucket.R)
        for i in ids:
            size, mu = bucket.best_through(i, ids)
            if best is None or size > best[0]:
                best = (size, bucket, i, mu)
    if best is not None:
        take(best[1], best[2], best[3])

    for i in range(len(family)):
        if i not in unassigned:
            continue
        choice = None
        for bucket in where[i]:
            allowed = [j for j in bucket.R if j in unassigned]
            size, mu = bucket.best_through(i, allowed)
            if choice is None or size > choice[0]:
                choice = (size, bucket, mu)
        take(choice[1], i, choice[2])
    return classes


# --------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _classify_cached(family: PolyFamily, kind: str) -> tuple:
    if kind == ADDITIVE:
        classes = _classify_additive(family)
    elif kind == MULTIPLICATIVE:
        classes = _classify_multiplicative(family)
    else:
        raise ValueError(f"unknown class kind {kind!r}")
    for cls in classes:
        for i, a in cls.members:
            if cls.rebuild(a) != family[i]:
                raise AssertionError(f"class certificate failed for member {i}")
    classes.sort(key=lambda c: (-len(c), c.indices[0]))
    return tuple(classes)


def classify_family(family, kind: str) -> list:
    """Partition ``family`` into additive or multiplicative classes, largest first."""
    if not isinstance(family, PolyFamily):
        family = PolyFamily(tuple(family))
    if not len(family):
        raise ValueError("family is empty")
    return list(_classify_cached(family, kind))


def meets_threshold(class_size: int, family_size: int, eps: float) -> bool:
    """class_size >= family_size^(1-eps), compared in logs with 1e-12 slack."""
    return (1 - eps) * math.log(family_size) <= math.log(class_size) + 1e-12


def eps_structured(family, eps: float) -> EpsVerdict:
    if not isinstance(family, PolyFamily):
        family = PolyFamily(tuple(family))
    if not 0 < eps < 1:
        raise ValueError("eps must be in (0,1)")
    add = classify_family(family, ADDITIVE)
    mul = classify_family(family, MULTIPLICATIVE)
    n = len(family)
    is_add = meets_threshold(len(add[0]), n, eps)
    is_mul = meets_threshold(len(mul[0]), n, eps)
    witness = add[0] if len(add[0]) >= len(mul[0]) else mul[0]
    return EpsVerdict(is_add, is_mul, witness, len(add[0]), len(mul[0]))
