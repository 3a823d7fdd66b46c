import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weiljet.multiindex import ArityMismatchError, enumerate_box
from weiljet.weil import (
    CoefficientIndexError,
    DegenerateGeneratorError,
    NonInvertibleError,
    Shape,
    ShapeMismatchError,
    WeilElement,
    constant,
    element_from_json,
    element_to_json,
    from_coefficients,
    generator,
    monomial,
    one,
    slice_coefficient,
    zero,
)

SHAPES = [Shape((1,)), Shape((2,)), Shape((3,)), Shape((1, 1)), Shape((2, 1)), Shape((1, 1, 1)), Shape(())]

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def elements(draw, shape=None):
    if shape is None:
        shape = draw(st.sampled_from(SHAPES))
    coeffs = draw(
        st.lists(rationals, min_size=shape.size(), max_size=shape.size()).map(tuple)
    )
    return WeilElement(shape, coeffs)


@st.composite
def element_triples(draw):
    shape = draw(st.sampled_from(SHAPES))
    return (
        draw(elements(shape=shape)),
        draw(elements(shape=shape)),
        draw(elements(shape=shape)),
    )


def test_constant_examples():
    a = constant(Shape((1,)), 7)
    assert a.coefficient((0,)) == 7 and a.coefficient((1,)) == 0
    assert constant(Shape(()), 3).coeffs == (Fraction(3),)
    assert constant(Shape((2, 1)), 0).is_zero()


def test_generator_examples():
    d0 = generator(Shape((1, 1)), 0)
    assert d0.coefficient((1, 0)) == 1 and d0.coefficient((0, 1)) == 0
    d = generator(Shape((3,)), 0)
    assert (d**4).is_zero() and not (d**3).is_zero()
    with pytest.raises(DegenerateGeneratorError):
        generator(Shape((1, 0)), 1)
    with pytest.raises(ArityMismatchError):
        generator(Shape((1,)), 3)


def test_mul_examples():
    s = Shape((1,))
    d = generator(s, 0)
    assert (one(s) + d * 2) * (constant(s, 3) + d * 4) == constant(s, 3) + d * 10

    s2 = Shape((1, 1))
    total = generator(s2, 0) + generator(s2, 1)
    assert total**2 == generator(s2, 0) * generator(s2, 1) * 2

    s3 = Shape((2,))
    d = generator(s3, 0)
    assert (one(s3) + d) * (one(s3) - d) == one(s3) - d * d


def test_pow_examples():
    d = generator(Shape((1,)), 0)
    assert (d**2).is_zero()
    assert (d**0) == one(Shape((1,)))

    s = Shape((1, 1))
    assert ((generator(s, 0) + generator(s, 1)) ** 3).is_zero()

    s3 = Shape((1, 1, 1))
    gens = [generator(s3, i) for i in range(3)]
    assert (gens[0] + gens[1] + gens[2]) ** 3 == gens[0] * gens[1] * gens[2] * 6


def test_invert_examples():
    s = Shape((3,))
    d = generator(s, 0)
    inv = (one(s) + d).invert()
    assert inv == one(s) - d + d * d - d * d * d
    assert (one(s) + d) * inv == one(s)

    assert constant(Shape((1,)), 2).invert() == constant(Shape((1,)), Fraction(1, 2))

    with pytest.raises(NonInvertibleError):
        generator(Shape((1,)), 0).invert()


def test_is_in_Dm_examples():
    d = generator(Shape((1,)), 0)
    assert d.is_in_Dm(1)

    s = Shape((1, 1))
    total = generator(s, 0) + generator(s, 1)
    assert not total.is_in_Dm(1)
    assert total.is_in_Dm(2)

    assert zero(Shape((2, 1))).is_in_Dm(0)


def test_coefficient_examples():
    s = Shape((1,))
    a = constant(s, 3) + generator(s, 0) * 10
    assert a.coefficient((1,)) == 10

    s2 = Shape((1, 1))
    sq = (generator(s2, 0) + generator(s2, 1)) ** 2
    assert sq.coefficient((1, 1)) == 2

    s3 = Shape((2,))
    assert ((one(s3) + generator(s3, 0)) ** 2).coefficient((2,)) == 1

    with pytest.raises(CoefficientIndexError):
        a.coefficient((2,))
    with pytest.raises(CoefficientIndexError):
        a.coefficient((0, 0))


def test_shape_mismatch_is_an_error():
    a = one(Shape((1,)))
    b = one(Shape((2,)))
    with pytest.raises(ShapeMismatchError):
        a + b
    with pytest.raises(ShapeMismatchError):
        a * b


def test_monomial_outside_box_is_zero():
    s = Shape((1, 2))
    assert monomial(s, (1, 2)).coefficient((1, 2)) == 1
    assert monomial(s, (2, 0)).is_zero()


def test_slice_coefficient_peels_one_generator():
    s = Shape((1, 2))
    a = from_coefficients(s, {(0, 0): 5, (1, 0): 7, (1, 2): 3, (0, 1): 2})
    linear = slice_coefficient(a, 0, 1)
    assert linear.shape == Shape((2,))
    assert linear.coefficient((0,)) == 7
    assert linear.coefficient((2,)) == 3
    rest = slice_coefficient(a, 0, 0)
    assert rest.coefficient((1,)) == 2


@given(element_triples())
def test_ring_laws(triple):
    a, b, c = triple
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + zero(a.shape) == a
    assert a * one(a.shape) == a
    assert a + (-a) == zero(a.shape)


@given(elements())
def test_zero_constant_term_forces_nilpotency(a):
    a = a - constant(a.shape, a.constant_term())
    bound = a.shape.nilpotency_bound()
    assert a.is_in_Dm(bound)


@given(elements())
def test_invert_roundtrip(a):
    if a.constant_term() == 0:
        with pytest.raises(NonInvertibleError):
            a.invert()
    else:
        assert a * a.invert() == one(a.shape)


def _full_poly_product(a: WeilElement, b: WeilElement) -> dict:
    # Untruncated polynomial product, as a plain exponent -> coefficient map.
    out: dict = {}
    box = a.shape.box()
    for alpha, ca in zip(box, a.coeffs):
        if not ca:
            continue
        for beta, cb in zip(box, b.coeffs):
            if not cb:
                continue
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            out[gamma] = out.get(gamma, Fraction(0)) + ca * cb
    return out


@settings(max_examples=60)
@given(st.sampled_from(SHAPES[:6]).flatmap(lambda s: st.tuples(elements(shape=s), elements(shape=s))))
def test_mul_matches_untruncated_product_inside_box(pair):
    a, b = pair
    product = a * b
    full = _full_poly_product(a, b)
    for gamma in enumerate_box(a.shape.orders):
        assert product.coefficient(gamma) == full.get(gamma, Fraction(0))


@given(elements())
def test_json_roundtrip(a):
    assert element_from_json(element_to_json(a)) == a


def test_json_omits_zeros_and_keeps_box_order():
    s = Shape((2, 1))
    a = from_coefficients(s, {(0, 0): 1, (2, 1): Fraction(-3, 2)})
    doc = element_to_json(a)
    assert doc["orders"] == [2, 1]
    assert doc["coeffs"] == [
        {"alpha": [0, 0], "num": "1", "den": "1"},
        {"alpha": [2, 1], "num": "-3", "den": "2"},
    ]


def test_scalar_module_structure():
    s = Shape((2,))
    d = generator(s, 0)
    assert d * 3 == 3 * d
    assert (d * 3) / 3 == d
    assert d * Fraction(1, 2) + d * Fraction(1, 2) == d


def test_exhaustive_nilpotency_ladder_small_shapes():
    # 0 is m-nilpotent for every m; membership is upward closed.
    for orders in itertools.product(range(3), repeat=2):
        shape = Shape(orders)
        z = zero(shape)
        for m in range(4):
            assert z.is_in_Dm(m)
        d_total = sum((generator(shape, i) for i in range(2) if orders[i]), zero(shape))
        levels = [m for m in range(6) if d_total.is_in_Dm(m)]
        if levels:
            first = levels[0]
            assert levels == list(range(first, 6))
