"""Dense integer-coefficient polynomials for exact factorization checks.

Coefficients are stored lowest degree first with a nonzero leading
coefficient (the zero polynomial has an empty coefficient tuple).  Only
the small toolbox needed for exact verification lives here; division is
synthetic division at the root z = 1, applied repeatedly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import VerificationFailure


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs=()):
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "IntPolynomial":
        return cls(())

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (c,))

    # -- structure -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(tuple(other * c for c in self.coeffs))
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return IntPolynomial.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPolynomial":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = IntPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- division ----------------------------------------------------------

    def synthetic_divide_at_one(self) -> tuple["IntPolynomial", int]:
        """Divide by (z - 1): returns (quotient, remainder), remainder = p(1)."""
        if self.is_zero():
            return IntPolynomial.zero(), 0
        out: list[int] = []
        acc = 0
        for c in reversed(self.coeffs):
            acc += c
            out.append(acc)
        remainder = out.pop()
        out.reverse()
        return IntPolynomial(out), remainder


def divide_out_one_minus_z(p: IntPolynomial, times: int) -> IntPolynomial:
    """Exact quotient p / (1 - z)**times; raises if any remainder is nonzero."""
    q = p
    for step in range(times):
        q, rem = q.synthetic_divide_at_one()
        if rem != 0:
            raise VerificationFailure(
                f"nonzero remainder {rem} when dividing by (1 - z) (pass {step + 1} of {times})"
            )
        q = -q  # (1 - z) = -(z - 1)
    return q


def evaluate_fraction(p: IntPolynomial, x: Fraction) -> Fraction:
    return p(Fraction(x))
