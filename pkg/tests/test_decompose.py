import random
from fractions import Fraction

import pytest

from expandlab.polyalg import UniPoly, compose_chain, decompose_uni, parse_unipoly, right_component


def rand_poly(rng, deg, lo=-9, hi=9):
    coeffs = [rng.randint(lo, hi) for _ in range(deg)] + [rng.choice([c for c in range(lo, hi + 1) if c])]
    return UniPoly(coeffs)


def test_quartic_example():
    decs = decompose_uni(parse_unipoly("x^4 + 2*x^2 + 1"))
    assert len(decs) == 1
    assert decs[0].outer == parse_unipoly("t^2 + 2*t + 1")
    assert decs[0].inner == parse_unipoly("t^2")


def test_monomial_splits():
    decs = decompose_uni(parse_unipoly("x^6"))
    assert {(d.inner.degree, d.outer) for d in decs} == {
        (3, parse_unipoly("t^2")),
        (2, parse_unipoly("t^3")),
    }


def test_prime_degree_is_indecomposable():
    assert decompose_uni(parse_unipoly("x^5 + x")) == []
    assert decompose_uni(parse_unipoly("x^4 + x")) == []


def test_right_component_rejects_bad_degree():
    assert right_component(parse_unipoly("t^4"), 3) is None


@pytest.mark.parametrize("seed", range(5))
def test_random_round_trip(seed):
    rng = random.Random(seed)
    for _ in range(40):
        g = rand_poly(rng, rng.randint(2, 6))
        h = rand_poly(rng, rng.randint(2, 6))
        f = g.compose(h)
        decs = decompose_uni(f)
        assert decs, (g, h)
        for d in decs:
            assert d.recompose() == f
            assert d.inner.lc == 1 and d.inner.coeff(0) == 0
            assert d.inner.degree >= 2 and d.outer.degree >= 2
        assert any(d.inner.degree == h.degree for d in decs)


def test_normalization_absorbs_linear_maps():
    g, h = parse_unipoly("t^2 - 3*t"), parse_unipoly("t^3 + t")
    alpha = parse_unipoly("5*t - 2")
    alpha_inv = UniPoly([Fraction(2, 5), Fraction(1, 5)])
    f1 = g.compose(h)
    f2 = g.compose(alpha_inv).compose(alpha.compose(h))
    assert f1 == f2
    inner1 = {d.inner for d in decompose_uni(f1)}
    inner2 = {d.inner for d in decompose_uni(f2)}
    assert inner1 == inner2


def test_compose_chain():
    a, b, c = parse_unipoly("t+1"), parse_unipoly("t^2"), parse_unipoly("2*t")
    assert compose_chain(a, b, c) == parse_unipoly("4*t^2 + 1")
