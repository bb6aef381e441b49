"""Exact integer polynomial arithmetic and synthetic division."""

from fractions import Fraction as F

import pytest

from betheising import IntPolynomial, VerificationFailure
from betheising.polynomials import divide_out_one_minus_z


def poly(*coeffs):
    return IntPolynomial(coeffs)


class TestArithmetic:
    def test_normalization_strips_leading_zeros(self):
        assert poly(1, 2, 0, 0).coeffs == (1, 2)
        assert poly(0, 0).coeffs == ()
        assert poly().degree == -1

    def test_add_mul(self):
        a = poly(1, 1)        # 1 + z
        b = poly(-1, 1)       # -1 + z
        assert (a * b).coeffs == (-1, 0, 1)
        assert (a + b).coeffs == (0, 2)
        assert (a - a).is_zero()

    def test_pow(self):
        assert (poly(1, 1) ** 2).coeffs == (1, 2, 1)
        assert (poly(1, -1) ** 5).coeffs == (1, -5, 10, -10, 5, -1)
        assert (poly(3) ** 0).coeffs == (1,)

    def test_scalar_mul(self):
        assert (3 * poly(1, 2)).coeffs == (3, 6)

    def test_evaluate(self):
        p = poly(1, 0, -2)  # 1 - 2 z^2
        assert p(2) == -7
        assert p(F(1, 2)) == F(1, 2)

    def test_monomial(self):
        assert IntPolynomial.monomial(3, 4).coeffs == (0, 0, 0, 4)


class TestSyntheticDivision:
    def test_exact_reconstruction(self):
        # ((1 - z)^5 * q) / (1 - z)^5 == q
        q = poly(30, 18)
        product = (poly(1, -1) ** 5) * q
        assert divide_out_one_minus_z(product, 5) == q

    def test_remainder_detected(self):
        # (1 - z)^4 (z + 1) is not divisible by (1 - z)^5
        p = (poly(1, -1) ** 4) * poly(1, 1)
        with pytest.raises(VerificationFailure, match="remainder"):
            divide_out_one_minus_z(p, 5)

    def test_single_division(self):
        p = poly(-1, 0, 1)  # z^2 - 1 = (z - 1)(z + 1)
        quotient, rem = p.synthetic_divide_at_one()
        assert rem == 0
        assert quotient.coeffs == (1, 1)

    def test_division_with_remainder_value(self):
        p = poly(1, 1)  # 1 + z -> p(1) = 2
        _, rem = p.synthetic_divide_at_one()
        assert rem == 2
