"""Model parameters: branching number d and inverse temperature beta.

The engine is parameterized by t = e^{2*beta} rather than beta itself:
exact arithmetic is possible exactly when t is rational, and at the
critical point t = (d+1)/(d-1).  A float-only beta is kept as the exact
binary/decimal rational the caller supplied and exponentiated at the
working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpf, workprec

from .errors import DomainError, ModeError
from .numerics import DEFAULT_PRECISION_BITS, fraction_to_mpf, validate_precision


def critical_b(d: int) -> Fraction:
    """Critical t = e^{2*beta_c} = (d+1)/(d-1), exact."""
    if not isinstance(d, int) or d < 2:
        raise DomainError(f"branching number d must be an integer >= 2, got {d!r}")
    return Fraction(d + 1, d - 1)


def critical_beta(d: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> tuple[mpf, Fraction]:
    """Critical inverse temperature atanh(1/d) at the requested precision.

    Returns (beta_c as mpf, e^{2*beta_c} as exact Fraction).
    """
    b = critical_b(d)
    validate_precision(precision_bits)
    with workprec(precision_bits + 16):
        beta = mpmath.atanh(mpf(1) / d)
    with workprec(precision_bits):
        beta = +beta
    return beta, b


def max_exact_index(d: int) -> int:
    """Largest recursion index allowed in exact mode (digit count grows ~ d**n)."""
    if d == 2:
        return 16
    if d == 3:
        return 10
    return 6


@dataclass(frozen=True)
class ModelParams:
    """Branching number plus one of: critical point, exact rational t, float beta.

    Exactly one of `t` (exact e^{2*beta}) and `beta` (float-only mode,
    stored as the exact rational the caller supplied) is set.
    """

    d: int
    t: Fraction | None = None
    beta: Fraction | None = None

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2:
            raise DomainError(f"branching number d must be an integer >= 2, got {self.d!r}")
        if (self.t is None) == (self.beta is None):
            raise DomainError("exactly one of t and beta must be given")
        if self.t is not None and self.t <= 1:
            raise DomainError(f"t = e^(2*beta) must exceed 1 (beta > 0), got {self.t}")
        if self.beta is not None and self.beta <= 0:
            raise DomainError(f"beta must be positive, got {self.beta}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def critical(cls, d: int) -> "ModelParams":
        return cls(d=d, t=critical_b(d))

    @classmethod
    def from_t(cls, d: int, t) -> "ModelParams":
        return cls(d=d, t=Fraction(t))

    @classmethod
    def from_beta(cls, d: int, beta) -> "ModelParams":
        return cls(d=d, beta=Fraction(beta))

    # -- accessors ------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.t is not None

    @property
    def is_critical(self) -> bool:
        return self.t is not None and self.t == Fraction(self.d + 1, self.d - 1)

    @property
    def b_fraction(self) -> Fraction:
        if self.t is None:
            raise ModeError("float-beta parameters have no exact t = e^(2*beta)")
        return self.t

    def b_mpf(self, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
        """t = e^{2*beta} at the requested float precision."""
        validate_precision(precision_bits)
        if self.t is not None:
            return fraction_to_mpf(self.t, precision_bits)
        with workprec(precision_bits + 16):
            val = mpmath.exp(2 * fraction_to_mpf(self.beta))
        with workprec(precision_bits):
            return +val

    def b_minus_one_mpf(self, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
        """t - 1 = e^{2*beta} - 1, computed without cancellation for small beta."""
        validate_precision(precision_bits)
        if self.t is not None:
            return fraction_to_mpf(self.t - 1, precision_bits)
        with workprec(precision_bits + 16):
            val = mpmath.expm1(2 * fraction_to_mpf(self.beta))
        with workprec(precision_bits):
            return +val

    def beta_mpf(self, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
        validate_precision(precision_bits)
        with workprec(precision_bits + 16):
            if self.beta is not None:
                val = fraction_to_mpf(self.beta)
            else:
                val = mpmath.log(fraction_to_mpf(self.t)) / 2
        with workprec(precision_bits):
            return +val

    def describe_beta(self) -> str:
        """Stable text form of the temperature choice, for report metadata."""
        if self.is_critical:
            return "critical"
        if self.t is not None:
            return f"t={self.t.numerator}/{self.t.denominator}"
        return f"beta={self.beta.numerator}/{self.beta.denominator}"
