import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expandlab.errors import ArityError, DegenerateInputError, KindMismatchError
from expandlab.exactnum import TowerInt
from expandlab.expansion import (
    BoundParams,
    FiniteSet,
    PowerMap,
    SurfaceSpec,
    coarse_dim,
    delta_jz,
    eta0_main1d,
    eta_unbalanced_er,
    fit_exponent,
    gp_statistic,
    image_size,
    image_size_multi,
    incidence_surface,
)
from expandlab.polyalg import MultiPoly, UniPoly, parse_poly, parse_unipoly

from oracles import brute_image, brute_incidence_graph, brute_multi, random_rationals

XD = ("x", "d")


def S(*xs):
    return FiniteSet.of(xs)


def test_finite_set_kinds():
    assert len(S(1, Fraction(2, 2), 3)) == 2
    with pytest.raises(KindMismatchError):
        FiniteSet.of([1, TowerInt(2)])


def test_image_examples():
    A = FiniteSet.of(range(10))
    assert image_size([parse_unipoly("t")], A) == 10
    assert image_size([parse_unipoly(f"t+{b}") for b in range(10)], A) == 19
    towers = FiniteSet.of(TowerInt(i) for i in range(3))
    assert image_size([parse_unipoly("t^2"), parse_unipoly("t^4")], towers) == 4
    assert image_size([PowerMap(1), PowerMap(2)], towers) == 4


def test_tower_rejects_other_polynomials():
    towers = FiniteSet.of([TowerInt(0)])
    with pytest.raises(KindMismatchError):
        image_size([parse_unipoly("t^3")], towers)
    with pytest.raises(KindMismatchError):
        image_size([parse_unipoly("t^2 + 1")], towers)


def test_multi_examples():
    A = FiniteSet.of(range(5))
    B = FiniteSet.of([0, 1])
    assert image_size_multi(parse_poly("x"), A, []) == 5
    assert image_size_multi(parse_poly("x + y0 + y1"), A, [B, B]) == 7
    assert image_size_multi(parse_poly("x*y0"), S(1, 2, 4), [S(1, 2)]) == 4
    with pytest.raises(ArityError):
        image_size_multi(parse_poly("x*y0"), A, [])


def test_incidence_examples():
    f = parse_poly("x + d", variables=XD)
    Z = S(0, 1)
    assert incidence_surface(SurfaceSpec.graph(f), Z, Z, Z) == 3
    assert incidence_surface(SurfaceSpec.graph(parse_poly("x*d", variables=XD)), S(1), S(1), S(1)) == 1
    F = parse_poly("y0 - x - d", variables=("x", "d", "y0"))
    assert incidence_surface(SurfaceSpec.implicit(F), Z, Z, Z) == 3


def test_surface_arity_checked():
    with pytest.raises(ArityError):
        SurfaceSpec.implicit(parse_poly("x + d", variables=XD))


def test_coarse_dim_examples():
    assert coarse_dim(7, 7).value == pytest.approx(1.0, abs=1e-15)
    assert coarse_dim(49, 7).value == pytest.approx(2.0, abs=1e-15)
    assert coarse_dim(65536, 256).value == 2.0
    assert coarse_dim(1, 10).value == 0.0
    with pytest.raises(ValueError):
        coarse_dim(5, 1)


@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6), st.floats(1.01, 1e6))
def test_coarse_dim_additive(x, y, xi):
    assert abs(coarse_dim(x * y, xi).value - coarse_dim(x, xi).value - coarse_dim(y, xi).value) <= 1e-12


def test_fit_examples():
    pts = [(n, round(n ** 1.5)) for n in (10, 100, 1000, 10000)]
    assert fit_exponent(pts).slope == pytest.approx(1.5, abs=0.05)
    two = fit_exponent([(2, 8), (4, 64)])
    assert two.slope == pytest.approx(3.0, abs=1e-12) and two.residual < 1e-12
    with pytest.raises(ValueError):
        fit_exponent([(2, 3)])
    with pytest.raises(ValueError):
        fit_exponent([(2, 3), (2, 5)])


@given(st.integers(1, 6), st.integers(1, 3), st.integers(1, 5))
def test_fit_exact_power_law(p, q, c):
    pts = [(2 ** (q * k), c * 2 ** (p * k)) for k in range(1, 5)]
    fit = fit_exponent(pts)
    assert abs(fit.slope - p / q) < 1e-9
    assert fit.residual < 1e-9


def test_bound_examples():
    assert eta_unbalanced_er(1, 1, 1) == 0.5
    assert eta_unbalanced_er(2, 1, 1) == 0.125
    assert eta_unbalanced_er(1, 1e9, 1) < 1 and eta_unbalanced_er(1, 1e9, 1) > eta_unbalanced_er(1, 10, 1)
    assert eta0_main1d(1, 1) == 4.0
    assert delta_jz(BoundParams(gamma_prime=0.75, k=3, r=3, gamma=0.5, c=1)) == 2.0 ** -38
    assert delta_jz(gamma_prime=1, k=1, r=0.01, gamma=100, c=1) <= 2 ** -3
    assert delta_jz(k=10 ** 6) < delta_jz(k=10)
    with pytest.raises(ValueError):
        delta_jz(gamma=0)


def test_eta0_follows_printed_formula():
    eps = 0.5
    assert eta0_main1d(eps, 1) == pytest.approx(eps / (1 + 1 / eps) * 2 ** (-4 / eps + 7), rel=1e-15)
    vals = [eta0_main1d(0.3, c) for c in (0.1, 0.3, 0.6, 1.0)]
    assert vals == sorted(vals)


def test_gp_statistic():
    A = S(-2, -1, 1, 2)
    assert gp_statistic(A, [parse_unipoly("t^2")]) == 2
    assert gp_statistic(A, [parse_unipoly("t")]) == 1
    with pytest.raises(DegenerateInputError):
        gp_statistic(A, [UniPoly.const(3)])


@pytest.mark.parametrize("seed", range(3))
def test_counters_match_loops(seed):
    rng = random.Random(seed)
    for _ in range(20):
        A = random_rationals(rng, rng.randint(1, 25))
        fam = [UniPoly([rng.randint(-3, 3) for _ in range(rng.randint(1, 4))] + [rng.choice((1, -2))])
               for _ in range(rng.randint(1, 5))]
        assert image_size(fam, FiniteSet.of(A)) == brute_image(fam, A)
        d = max(p.degree for p in fam)
        assert image_size(fam, FiniteSet.of(A)) * d >= len(A)
        f = MultiPoly({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(4)}, ("x", "y0"))
        B = random_rationals(rng, rng.randint(1, 10))
        assert image_size_multi(f, FiniteSet.of(A), [FiniteSet.of(B)]) == brute_multi(f, A, [B])
        g = MultiPoly({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(3)}, XD)
        D = random_rationals(rng, rng.randint(1, 10))
        C = sorted({g(a, b) for a in A[:5] for b in D[:3]} | set(random_rationals(rng, 5)))
        want = brute_incidence_graph(g, A, D, C)
        graph = incidence_surface(SurfaceSpec.graph(g), FiniteSet.of(A), FiniteSet.of(D), FiniteSet.of(C))
        implicit = incidence_surface(SurfaceSpec.graph(g).as_implicit(), FiniteSet.of(A), FiniteSet.of(D), FiniteSet.of(C))
        assert graph == implicit == want


def test_worker_count_does_not_change_results():
    A = FiniteSet.of(range(1, 60))
    f = parse_poly("x^2 + x*y0 + y0^2")
    base = image_size_multi(f, A, [A])
    assert image_size_multi(f, A, [A], workers=3) == base
    fam = [parse_unipoly("t^2"), parse_unipoly("t^3 - t")]
    assert image_size(fam, A, workers=2) == image_size(fam, A)
    g = SurfaceSpec.graph(parse_poly("x*d", variables=XD))
    assert incidence_surface(g, A, A, A, workers=2) == incidence_surface(g, A, A, A)


def test_additive_family_does_not_expand():
    n = 50
    fam = [parse_unipoly(f"(t+{a})^2") for a in range(n)]
    assert image_size(fam, FiniteSet.of(range(n))) <= 2 * n - 1
