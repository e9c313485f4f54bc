from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expandlab.errors import ArityError, PolySyntaxError, UnknownVariableError
from expandlab.polyalg import MultiPoly, UniPoly, eval_poly, parse_any, parse_poly, parse_unipoly


def test_parse_terms():
    f = parse_poly("x^2*y0 + 3*x - 1/2")
    assert f.terms == {(2, 1): 1, (1, 0): 3, (0, 0): Fraction(-1, 2)}


def test_parse_expands_powers():
    x = MultiPoly.var("x", ("x", "y0"))
    y = MultiPoly.var("y0", ("x", "y0"))
    assert parse_poly("(x+y0)^2") == x * x + 2 * x * y + y * y


def test_parse_errors():
    with pytest.raises(PolySyntaxError) as info:
        parse_poly("x^")
    assert info.value.offset == 2
    with pytest.raises(PolySyntaxError):
        parse_poly("2x")
    with pytest.raises(PolySyntaxError):
        parse_poly("x^-1")
    with pytest.raises((UnknownVariableError, PolySyntaxError)):
        parse_poly("z + 1")
    with pytest.raises(ArityError):
        parse_poly("y3", arity=2)


def test_parse_any_dispatch():
    assert isinstance(parse_any("t^2 + 1"), UniPoly)
    assert isinstance(parse_any("x*y0"), MultiPoly)


def test_evaluation_examples():
    assert eval_poly(parse_poly("x + y0"), (Fraction(1, 2), Fraction(1, 3))) == Fraction(5, 6)
    assert eval_poly(MultiPoly.zero(("x", "y0")), (4, 5)) == 0
    assert eval_poly(parse_poly("x^2*y0 + 3*x - 1/2"), (2, 3)) == Fraction(35, 2)
    with pytest.raises(ValueError):
        eval_poly(parse_poly("x + y0"), (1,))


def test_multipoly_invariants():
    f = parse_poly("x*y0 - x*y0 + 2")
    assert f.terms == {(0, 0): 2}
    assert f.arity == 2


coeff_lists = st.lists(st.integers(-5, 5), min_size=1, max_size=6)


@given(coeff_lists, coeff_lists, st.integers(-4, 4))
def test_unipoly_ring_and_composition(a, b, x):
    p, q = UniPoly(a), UniPoly(b)
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)
    assert p.compose(q)(x) == p(q(x))
    if not q.is_zero():
        quo, rem = p.divmod(q)
        assert quo * q + rem == p
        assert rem.degree < q.degree or q.degree == 0 and rem.is_zero()


@given(coeff_lists)
def test_unipoly_text_round_trip(a):
    p = UniPoly(a)
    assert parse_unipoly(p.to_text()) == p
    assert p.shift(3).shift(-3) == p
    assert p.antiderivative().derivative() == p


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-4, 4), max_size=6),
       st.integers(-3, 3), st.integers(-3, 3))
def test_multipoly_text_round_trip_and_eval(terms, a, b):
    f = MultiPoly(terms, ("x", "y0"))
    g = parse_poly(f.to_text(), arity=2)
    assert g == f
    direct = sum(Fraction(c) * a ** i * b ** j for (i, j), c in terms.items())
    assert f(a, b) == direct
