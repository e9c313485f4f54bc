import random

import pytest

from expandlab.errors import DegenerateInputError
from expandlab.polyalg import MultiPoly, addmul_by_splits, detect_addmul, parse_poly, parse_unipoly, poly_root
from expandlab.polyalg.addmul import ADDITIVE, MULTIPLICATIVE, NONE

from oracles import random_bidegree3, random_structured


def test_product_is_multiplicative():
    form = detect_addmul(parse_poly("x*y0"))
    assert form.kind == MULTIPLICATIVE
    assert form.g == parse_unipoly("t")
    assert form.h == parse_unipoly("t")
    assert form.s == parse_poly("y0", variables=("y0",))


def test_cubed_sum_is_additive():
    f = parse_poly("(x + y0^2)^3 + 1")
    form = detect_addmul(f)
    assert form.kind == ADDITIVE
    assert form.g == parse_unipoly("t^3 + 1")
    assert form.h == parse_unipoly("t")
    assert form.s == parse_poly("y0^2", variables=("y0",))
    assert form.recompose(f.variables) == f


def test_generic_quadratic_form_is_none():
    f = parse_poly("x^2 + x*y0 + y0^2")
    assert detect_addmul(f).kind == NONE
    assert addmul_by_splits(f).kind == NONE


def test_degenerate_inputs_rejected():
    with pytest.raises(DegenerateInputError):
        detect_addmul(parse_poly("y0^2 + 1"))
    with pytest.raises(DegenerateInputError):
        detect_addmul(parse_poly("x^2 + 1", arity=2))


def test_several_y_variables():
    f = parse_poly("(x^2 + y0*y1 + y1^3)^2")
    form = detect_addmul(f)
    assert form.kind == ADDITIVE
    assert form.recompose(f.variables) == f
    g = parse_poly("(x + 1)^2 * (y0 - y1)^2 + 5")
    form = detect_addmul(g)
    assert form.kind == MULTIPLICATIVE
    assert form.recompose(g.variables) == g


def test_poly_root():
    p = parse_poly("(x - 2*y0 + 1)^3", arity=2)
    r = poly_root(p, 3)
    assert r ** 3 == p
    assert poly_root(parse_poly("x^2 + 1"), 2) is None


@pytest.mark.parametrize("seed", range(4))
def test_oracle_agreement_random(seed):
    rng = random.Random(1000 + seed)
    for _ in range(50):
        f = random_bidegree3(rng)
        got, want = detect_addmul(f), addmul_by_splits(f)
        assert got.kind == want.kind, f
        if got:
            assert got.recompose(f.variables) == f == want.recompose(f.variables)


@pytest.mark.parametrize("seed", range(4))
def test_oracle_agreement_structured(seed):
    rng = random.Random(2000 + seed)
    for _ in range(50):
        kind, f = random_structured(rng)
        got, want = detect_addmul(f), addmul_by_splits(f)
        assert got.kind == want.kind != NONE, f
        assert got.recompose(f.variables) == f
        assert want.recompose(f.variables) == f


def test_witness_normal_forms():
    rng = random.Random(7)
    for _ in range(60):
        _, f = random_structured(rng)
        form = detect_addmul(f)
        assert form.h.lc == 1
        if form.kind == ADDITIVE:
            assert form.h.coeff(0) == 0 and form.s.constant_term() == 0
        else:
            assert form.s.leading_term()[1] == 1
