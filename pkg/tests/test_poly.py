import random
from fractions import Fraction

import pytest

from engine.poly import (
    SparsePoly,
    affine,
    pdiv_exact,
    pdivmod,
    pmul,
    rational_roots,
    render,
    truncate,
)
from engine.scalars import PRIME, RATIONAL, FieldError, FieldSpec

Q = FieldSpec(RATIONAL)
GF3 = FieldSpec(PRIME, 3)
GF5 = FieldSpec(PRIME, 5)


def _x(spec, nvars, i, power=1):
    return SparsePoly.variable(spec, nvars, i, power)


def _delta(coeffs):
    """Univariate over Q from {exponent: coefficient}."""
    return SparsePoly.from_terms(Q, 1, {(e,): c for e, c in coeffs.items()})


class TestArithmetic:
    def test_difference_of_squares(self):
        x1, x2 = _x(Q, 2, 0), _x(Q, 2, 1)
        product = (x1 + x2) * (x1 - x2)
        assert product == _x(Q, 2, 0, 2) - _x(Q, 2, 1, 2)

    def test_product_with_zero(self):
        f = _x(GF5, 2, 0) + SparsePoly.constant(GF5, 2, 3)
        assert (f * SparsePoly.zero(GF5, 2)).is_zero()

    def test_frobenius_in_characteristic_three(self):
        x1 = _x(GF3, 1, 0)
        one = SparsePoly.constant(GF3, 1, 1)
        cube = (x1 + one) * (x1 + one) * (x1 + one)
        assert cube == _x(GF3, 1, 0, 3) + one

    def test_zero_coefficients_are_dropped(self):
        f = SparsePoly.from_terms(GF3, 1, [((1,), 1), ((1,), 2)])
        assert f.is_zero()
        assert f.degree() == -1

    def test_truncate(self):
        f = SparsePoly.from_terms(Q, 2, {(2, 0): 1, (1, 1): 3, (0, 1): 5})
        assert truncate(f, (1, 1)).terms == {(1, 1): Fraction(3), (0, 1): Fraction(5)}

    def test_mismatched_fields(self):
        with pytest.raises(FieldError):
            pmul(_x(GF3, 1, 0), _x(GF5, 1, 0))

    def test_evaluate(self):
        f = _delta({2: 1, 0: -1})
        assert f.evaluate([Fraction(3)]) == 8
        assert f.evaluate([1]) == 0


def _random_poly(rng, spec, nvars):
    terms = {}
    for _ in range(rng.randint(0, 4)):
        exp = tuple(rng.randint(0, 2) for _ in range(nvars))
        terms[exp] = rng.randrange(spec.p)
    return SparsePoly.from_terms(spec, nvars, terms)


def test_ring_axioms_on_random_polynomials():
    rng = random.Random(11)
    for _ in range(500):
        f, g, h = (_random_poly(rng, GF5, 2) for _ in range(3))
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f * g == g * f
        assert (f - f).is_zero()


def test_degree_is_additive_for_nonzero_factors():
    rng = random.Random(5)
    for _ in range(100):
        f, g = _random_poly(rng, GF5, 2), _random_poly(rng, GF5, 2)
        if f.is_zero() or g.is_zero():
            continue
        # GF(5)[x1, x2] is a domain
        assert (f * g).degree() == f.degree() + g.degree()


class TestUnivariate:
    def test_division(self):
        quotient, remainder = pdivmod(_delta({2: 1, 0: -1}), _delta({1: 1, 0: -1}))
        assert quotient == _delta({1: 1, 0: 1})
        assert remainder.is_zero()

    def test_inexact_division(self):
        with pytest.raises(ArithmeticError):
            pdiv_exact(_delta({2: 1, 0: 1}), _delta({1: 1}))

    def test_affine(self):
        assert affine(Q, 2, -1) == _delta({0: 2, 1: -1})

    @pytest.mark.parametrize("coeffs, roots, leftover", [
        ({2: 1, 0: -1}, [Fraction(-1), Fraction(1)], False),
        ({2: 1, 0: -2}, [], True),
        ({3: 2, 2: -1}, [Fraction(0), Fraction(1, 2)], False),
        ({1: Fraction(1, 3), 0: Fraction(-1, 6)}, [Fraction(1, 2)], False),
        ({0: 5}, [], False),
    ])
    def test_rational_roots(self, coeffs, roots, leftover):
        assert rational_roots(_delta(coeffs)) == (roots, leftover)

    def test_rational_roots_needs_rationals(self):
        with pytest.raises(FieldError):
            rational_roots(_x(GF3, 1, 0))


class TestRender:
    def test_named_variable(self):
        assert _delta({2: 1, 0: -1}).render(["δ"]) == "δ^2 - 1"

    def test_default_names(self):
        f = SparsePoly.from_terms(Q, 2, {(1, 0): 1, (0, 1): Fraction(-1, 2), (0, 0): 3})
        assert render(f) == "x1 - 1/2*x2 + 3"

    def test_zero(self):
        assert render(SparsePoly.zero(GF3, 1)) == "0"

    def test_leading_negative(self):
        assert _delta({1: -2}).render(["t"]) == "-2*t"
