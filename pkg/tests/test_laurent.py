"""Exact scalar arithmetic: Laurent polynomials, gcds, rational functions."""

import random

import pytest

from mutsat.laurent import (
    ArithmeticDomainError,
    LaurentPoly,
    RationalFunction,
    divmod_poly,
    exact_div,
    format_laurent,
    format_ratfunc,
    parse_laurent,
    parse_ratfunc,
    poly_gcd,
    unit_monomial_quotient,
)
from mutsat.rationals import RAT, rat, rat_sqrt, rat_text


def L(coeffs):
    return LaurentPoly(coeffs)


class TestRationals:
    def test_rat_parse_roundtrip(self):
        for v in (RAT(3), RAT(-7, 2), RAT(0), RAT(22, 7)):
            assert rat(rat_text(v)) == v

    def test_rat_sqrt(self):
        assert rat_sqrt(RAT(9, 4)) == RAT(3, 2)
        assert rat_sqrt(RAT(2)) is None
        assert rat_sqrt(RAT(-4)) is None


class TestArithmetic:
    def test_mul_and_pow(self):
        p = L({1: 1, 0: 1})  # a + 1
        assert p * p == L({2: 1, 1: 2, 0: 1})
        assert p**3 == L({3: 1, 2: 3, 1: 3, 0: 1})

    def test_negative_exponents(self):
        p = L({-2: 1, 1: -3})
        q = L({2: 1})
        assert p * q == L({0: 1, 3: -3})
        assert (p * q).evaluate(RAT(2)) == RAT(1) - 3 * 8

    def test_evaluate_matches_multiplication(self):
        rng = random.Random(7)
        for _ in range(25):
            p = L({rng.randint(-6, 6): rng.randint(-5, 5) for _ in range(4)})
            q = L({rng.randint(-6, 6): rng.randint(-5, 5) for _ in range(4)})
            a0 = RAT(rng.randint(2, 9), 7)
            assert (p * q).evaluate(a0) == p.evaluate(a0) * q.evaluate(a0)

    def test_divmod_exact(self):
        p = L({2: 1, 0: -1})
        q = L({1: 1, 0: -1})
        quot, rem = divmod_poly(p, q)
        assert rem.is_zero() and quot == L({1: 1, 0: 1})

    def test_exact_div_with_monomial_content(self):
        p = L({5: 1, 3: -1})  # a^3 (a^2 - 1)
        q = L({-1: 1, -3: -1})  # a^-3 (a^2 - 1) ... = a^-1 - a^-3
        assert exact_div(p, q) == L({6: 1})
        assert exact_div(q, L({2: 1, 0: 1})) is None


class TestGcd:
    def test_factor_case(self):
        assert poly_gcd(L({2: 1, 0: -1}), L({1: 1, 0: -1})) == L({1: 1, 0: -1})

    def test_monomials_reduce_to_unit(self):
        # gcd of a^3, a^5 is a unit; the monomial content is reported separately
        assert poly_gcd(L({3: 1}), L({5: 1})) == L({0: 1})
        assert L({3: 1}).monomial_content() == 3
        assert L({5: 1}).monomial_content() == 5

    def test_perfect_square(self):
        assert poly_gcd(L({2: 1, 1: 2, 0: 1}), L({1: 1, 0: 1})) == L({1: 1, 0: 1})

    def test_divides_both_inputs(self):
        rng = random.Random(3)
        for _ in range(30):
            p = L({rng.randint(-4, 5): rng.randint(-4, 4) for _ in range(3)})
            q = L({rng.randint(-4, 5): rng.randint(-4, 4) for _ in range(3)})
            if p.is_zero() or q.is_zero():
                continue
            g = poly_gcd(p, q)
            assert exact_div(p, g) is not None
            assert exact_div(q, g) is not None

    def test_gcd_zero_zero_rejected(self):
        with pytest.raises(ArithmeticDomainError):
            poly_gcd(LaurentPoly(), LaurentPoly())


class TestUnitMonomialQuotient:
    def test_shift(self):
        assert unit_monomial_quotient(L({3: 1, 1: -1}), L({2: 1, 0: -1})) == (1, 1)

    def test_negation(self):
        assert unit_monomial_quotient(L({2: -1, 0: 1}), L({2: 1, 0: -1})) == (-1, 0)

    def test_unrelated(self):
        assert unit_monomial_quotient(L({2: 1, 0: 1}), L({2: 1, 0: -1})) is None

    def test_random_units_recovered(self):
        rng = random.Random(11)
        for _ in range(40):
            p = L({rng.randint(-5, 5): rng.randint(-6, 6) for _ in range(4)})
            if p.is_zero():
                continue
            sign = rng.choice((1, -1))
            k = rng.randint(-10, 10)
            shifted = p.shift(k) * sign
            assert unit_monomial_quotient(shifted, p) == (sign, k)

    def test_non_unit_scalar_rejected(self):
        p = L({1: 1, 0: 1})
        assert unit_monomial_quotient(p * 2, p) is None


class TestTextFormat:
    def test_q_form(self):
        assert format_laurent(L({24: 2, 20: -1, 0: 1})) == "2*q^6 - q^5 + 1"

    def test_a_form_when_not_q(self):
        assert format_laurent(L({2: 1, 0: -1})) == "a^2 - 1"

    def test_zero(self):
        assert format_laurent(LaurentPoly()) == "0"
        assert parse_laurent("0") == LaurentPoly()

    def test_roundtrip_random(self):
        rng = random.Random(5)
        for _ in range(60):
            p = L({
                rng.randint(-9, 9): RAT(rng.randint(-9, 9), rng.choice((1, 1, 2, 3)))
                for _ in range(rng.randint(1, 6))
            })
            assert parse_laurent(format_laurent(p)) == p

    def test_negative_exponent_text(self):
        p = L({-4: 1, 0: 3})
        assert format_laurent(p) == "3 + q^-1"
        assert parse_laurent("3 + q^-1") == p


class TestRationalFunction:
    def test_reduction(self):
        r = RationalFunction(L({3: 1, 1: -1}), L({2: 2, 0: -2}))
        assert r == RationalFunction(L({1: 1}), L({0: 2}))
        assert r.num == L({1: RAT(1, 2)})

    def test_canonical_denominator(self):
        r = RationalFunction(L({0: 1}), L({1: 3, 0: 2}))
        assert r.den.c[0] == 1
        assert r.den.min_exp() == 0

    def test_field_ops(self):
        a = RationalFunction.a_power(1)
        s = a * a
        expr = (s - 1 / s) / (a - 1 / a)
        assert expr == a + 1 / a

    def test_evaluate_consistency(self):
        rng = random.Random(13)
        x = RationalFunction(L({2: 1, 0: 1}), L({1: 1, 0: 3}))
        y = RationalFunction(L({1: 5, -1: 1}), L({0: 1, 2: 1}))
        for _ in range(10):
            a0 = RAT(rng.randint(2, 30), 7)
            assert (x * y).evaluate(a0) == x.evaluate(a0) * y.evaluate(a0)
            assert (x + y).evaluate(a0) == x.evaluate(a0) + y.evaluate(a0)
            assert (x / y).evaluate(a0) == x.evaluate(a0) / y.evaluate(a0)

    def test_text_roundtrip(self):
        r = RationalFunction(L({3: 1, 0: RAT(1, 2)}), L({2: 1, 0: -3}))
        assert parse_ratfunc(format_ratfunc(r)) == r
        p = RationalFunction.from_laurent(L({4: 2, 0: 1}))
        assert parse_ratfunc(format_ratfunc(p)) == p
