from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weiljet.calculus import partial_derivative
from weiljet.expression import Add, Const, Mul, Neg, Pow, Sub, Var, parse
from weiljet.oracle import (
    NotPolynomialError,
    SparsePoly,
    finite_difference,
    oracle_mixed,
    poly_eval,
    poly_partial,
    to_poly,
)
from weiljet.suites import FD_CORPUS

division_free_exprs = st.recursive(
    st.one_of(
        st.fractions(min_value=-5, max_value=5, max_denominator=4).map(Const),
        st.integers(0, 2).map(Var),
    ),
    lambda sub: st.one_of(
        st.tuples(sub, sub).map(lambda t: Add(*t)),
        st.tuples(sub, sub).map(lambda t: Sub(*t)),
        st.tuples(sub, sub).map(lambda t: Mul(*t)),
        sub.map(Neg),
        st.tuples(sub, st.integers(0, 3)).map(lambda t: Pow(*t)),
    ),
    max_leaves=14,
)


def test_to_poly_examples():
    assert to_poly(parse("x0^2*x1 + 3*x0")) == SparsePoly.make(
        2, {(2, 1): 1, (1, 0): 3}
    )
    assert to_poly(parse("(x0+1)^2")) == SparsePoly.make(1, {(2,): 1, (1,): 2, (0,): 1})
    with pytest.raises(NotPolynomialError):
        to_poly(parse("1/x0"))


def test_poly_partial_examples():
    assert poly_partial(SparsePoly.make(2, {(2, 1): 1}), 0) == SparsePoly.make(
        2, {(1, 1): 2}
    )
    assert poly_partial(SparsePoly.make(2, {(0, 3): 5}), 0) == SparsePoly.make(2, {})
    assert poly_partial(SparsePoly.make(1, {(1,): 1}), 0) == SparsePoly.make(1, {(0,): 1})


def test_poly_eval_examples():
    assert poly_eval(SparsePoly.make(2, {(2, 1): 1}), (3, 2)) == 18
    assert poly_eval(SparsePoly.make(2, {}), (7, 7)) == 0
    assert poly_eval(SparsePoly.make(0, {(): 7}), ()) == 7


def test_oracle_mixed_examples():
    assert oracle_mixed(parse("x0^2*x1"), (2, 1), (1, 2)) == 2
    assert oracle_mixed(parse("x0^2*x1"), (0, 0), (3, 2)) == 18
    assert oracle_mixed(parse("x0^2"), (5,), (1,)) == 0


def test_oracle_mixed_pads_short_indices():
    assert oracle_mixed(parse("x0^2*x1"), (1,), (1, 2)) == 4


@given(division_free_exprs, division_free_exprs)
def test_to_poly_is_a_ring_homomorphism(a, b):
    pa = to_poly(a, 3)
    pb = to_poly(b, 3)
    assert to_poly(Add(a, b), 3) == pa + pb
    assert to_poly(Mul(a, b), 3) == pa * pb
    assert to_poly(Sub(a, b), 3) == pa - pb


@settings(max_examples=60)
@given(division_free_exprs, st.integers(0, 2), st.integers(0, 2))
def test_poly_partials_commute(e, i, j):
    p = to_poly(e, 3)
    assert poly_partial(poly_partial(p, i), j) == poly_partial(poly_partial(p, j), i)


@given(
    division_free_exprs,
    st.lists(
        st.fractions(min_value=-4, max_value=4, max_denominator=3),
        min_size=3,
        max_size=3,
    ),
)
def test_poly_eval_matches_structural_evaluation(e, x):
    from weiljet.expression import evaluate

    assert poly_eval(to_poly(e, 3), x) == evaluate(e, x)


def test_finite_difference_examples():
    assert abs(finite_difference(parse("x0^3"), 0, (2.0,)) - 12.0) < 1e-6
    assert abs(finite_difference(parse("x0"), 0, (137.0,), 1e-3) - 1.0) < 1e-9
    assert abs(finite_difference(parse("5"), 0, (0.3,), 1e-3)) < 1e-9


def test_finite_difference_agreement_on_corpus():
    for text, point, wrt in FD_CORPUS:
        expr = parse(text)
        exact = float(partial_derivative(expr, wrt, [Fraction(v) for v in point]))
        fd = finite_difference(expr, wrt, point, 1e-4)
        assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact)), (text, fd, exact)


def test_finite_difference_is_second_order():
    # Halving h cuts the error by about 4 wherever the truncation term
    # (third derivative) dominates; skip directions where it vanishes.
    h = 1e-3
    checked = 0
    for text, point, wrt in FD_CORPUS:
        expr = parse(text)
        rational_point = [Fraction(v) for v in point]
        third = [0] * len(point)
        third[wrt] = 3
        if oracle_free_third_derivative(expr, tuple(third), rational_point) == 0:
            continue
        exact = float(partial_derivative(expr, wrt, rational_point))
        err_h = abs(finite_difference(expr, wrt, point, h) - exact)
        err_half = abs(finite_difference(expr, wrt, point, h / 2) - exact)
        ratio = err_h / err_half
        assert 3.0 <= ratio <= 5.0, (text, ratio)
        checked += 1
    assert checked >= 5


def oracle_free_third_derivative(expr, alpha, point):
    # Rational functions have no polynomial form; fall back to the jet value.
    try:
        return oracle_mixed(expr, alpha, point)
    except NotPolynomialError:
        from weiljet.calculus import mixed_derivative

        return mixed_derivative(expr, alpha, point)
