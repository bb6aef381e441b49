"""Number representations and precision plumbing.

Two modes are used throughout the package:

* exact -- ``fractions.Fraction``; available whenever t = e^{2*beta} is a
  rational number (in particular at criticality, where t = (d+1)/(d-1)).
* float -- ``mpmath.mpf`` with an explicit mantissa size in bits,
  round-to-nearest-even.  All float work runs inside ``mpmath.workprec``
  so the global context is restored afterwards.

``SqrtPower`` represents exact values of the form coeff * t**(half/2);
these show up because Boltzmann weights are integer powers of sqrt(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Context, Decimal, ROUND_HALF_EVEN
from fractions import Fraction

import mpmath
from mpmath import libmp, mp, mpf, workprec

from .errors import ConfigError, ModeError

DEFAULT_PRECISION_BITS = 128
MIN_PRECISION_BITS = 64
MAX_PRECISION_BITS = 4096

# Inequality checks treat |slack| below this as a tie rather than a pass/fail.
NEAR_TIE_EPS = Fraction(1, 2**64)

MIN_DIGITS = 6
MAX_DIGITS = 50


def validate_precision(bits: int) -> int:
    if not isinstance(bits, int) or not (MIN_PRECISION_BITS <= bits <= MAX_PRECISION_BITS):
        raise ConfigError(
            f"precision_bits must be an integer in [{MIN_PRECISION_BITS}, "
            f"{MAX_PRECISION_BITS}], got {bits!r}"
        )
    return bits


def validate_digits(digits: int) -> int:
    if not isinstance(digits, int) or not (MIN_DIGITS <= digits <= MAX_DIGITS):
        raise ConfigError(f"digits must be an integer in [{MIN_DIGITS}, {MAX_DIGITS}], got {digits!r}")
    return digits


def fraction_to_mpf(q: Fraction, prec: int | None = None) -> mpf:
    """Correctly rounded conversion Fraction -> mpf at `prec` bits (current prec if None).

    Built via make_mpf so the requested precision survives even when the
    ambient context is coarser.
    """
    bits = prec if prec is not None else mp.prec
    return mp.make_mpf(libmp.from_rational(q.numerator, q.denominator, bits, libmp.round_nearest))


def to_mpf(x, prec: int | None = None) -> mpf:
    """Convert int/Fraction/float/str/mpf to mpf, rounding rationals correctly."""
    if isinstance(x, Fraction):
        return fraction_to_mpf(x, prec)
    if prec is None:
        return mpf(x)
    with workprec(prec):
        return mpf(x)


def mpf_to_fraction(x: mpf) -> Fraction:
    """Exact value of a finite mpf as a Fraction."""
    sign, man, exp, _ = x._mpf_
    if man == 0 and exp != 0:
        raise ValueError(f"cannot convert non-finite value {x!r} to Fraction")
    frac = Fraction(int(man), 1) * Fraction(2) ** exp
    return -frac if sign else frac


def relative_difference(a, b) -> mpf:
    """|a - b| / max(|a|, |b|) as an mpf; 0 if both are zero."""
    aa, bb = mpf(a) if not isinstance(a, Fraction) else fraction_to_mpf(a), (
        mpf(b) if not isinstance(b, Fraction) else fraction_to_mpf(b)
    )
    scale = max(abs(aa), abs(bb))
    if scale == 0:
        return mpf(0)
    return abs(aa - bb) / scale


def format_scalar(x, digits: int = 17) -> str:
    """Deterministic text form: Fractions as "p/q", floats in decimal.

    Floats are converted exactly to a rational and rounded half-even to
    `digits` significant figures, so equal inputs give byte-equal output.
    """
    validate_digits(digits)
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        x = mpf(x)
    if isinstance(x, mpf):
        frac = mpf_to_fraction(x)
        if frac == 0:
            return "0"
        ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
        dec = ctx.divide(Decimal(frac.numerator), Decimal(frac.denominator))
        return str(dec)
    raise TypeError(f"cannot format value of type {type(x).__name__}")


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """sqrt(q) as a Fraction when q is a perfect square of a rational, else None."""
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class SqrtPower:
    """Exact value coeff * base**(half/2), with coeff and base rational, base > 0.

    Addition requires matching base and matching parity of `half` (after
    normalization); that is the only case the package needs.  Values with
    even `half` are plain rationals, see ``as_fraction``.
    """

    coeff: Fraction
    half: int
    base: Fraction

    def __post_init__(self):
        if self.base <= 0:
            raise ValueError("base must be positive")

    def normalized(self) -> "SqrtPower":
        """Fold even powers of the base (and rational square roots) into coeff."""
        coeff, half, base = self.coeff, self.half, self.base
        if coeff == 0:
            return SqrtPower(Fraction(0), 0, base)
        root = _rational_sqrt(base)
        if root is not None:
            return SqrtPower(coeff * root**half, 0, base)
        if half % 2 == 0:
            return SqrtPower(coeff * base ** (half // 2), 0, base)
        return SqrtPower(coeff * base ** ((half - 1) // 2), 1, base)

    def _check_base(self, other: "SqrtPower"):
        if self.base != other.base:
            raise ValueError("mismatched bases")

    def __add__(self, other: "SqrtPower") -> "SqrtPower":
        self._check_base(other)
        a, b = self.normalized(), other.normalized()
        if a.coeff == 0:
            return b
        if b.coeff == 0:
            return a
        if a.half != b.half:
            raise ValueError("cannot add values with incompatible radical parts")
        return SqrtPower(a.coeff + b.coeff, a.half, self.base)

    def __sub__(self, other: "SqrtPower") -> "SqrtPower":
        return self + SqrtPower(-other.coeff, other.half, other.base)

    def __mul__(self, other):
        if isinstance(other, SqrtPower):
            self._check_base(other)
            return SqrtPower(self.coeff * other.coeff, self.half + other.half, self.base)
        return SqrtPower(self.coeff * Fraction(other), self.half, self.base)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SqrtPower":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        return SqrtPower(self.coeff**n, self.half * n, self.base)

    def shift_half(self, delta: int) -> "SqrtPower":
        """Multiply by base**(delta/2)."""
        return SqrtPower(self.coeff, self.half + delta, self.base)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SqrtPower(Fraction(other), 0, self.base)
        if not isinstance(other, SqrtPower):
            return NotImplemented
        if self.base != other.base:
            return False
        a, b = self.normalized(), other.normalized()
        return a.coeff == b.coeff and a.half == b.half

    def __hash__(self):
        a = self.normalized()
        return hash((a.coeff, a.half, a.base))

    @property
    def is_rational(self) -> bool:
        return self.normalized().half == 0

    def as_fraction(self) -> Fraction:
        a = self.normalized()
        if a.half != 0:
            raise ModeError("value carries an odd power of sqrt(base); not rational")
        return a.coeff

    def to_mpf(self, prec: int | None = None) -> mpf:
        bits = prec if prec is not None else mp.prec
        a = self.normalized()
        with workprec(bits + 16):
            val = fraction_to_mpf(a.coeff) * mpmath.sqrt(fraction_to_mpf(a.base)) ** a.half
        with workprec(bits):
            return +val

    def __float__(self) -> float:
        return float(self.to_mpf(64))

    def __repr__(self):
        a = self.normalized()
        if a.half == 0:
            return f"SqrtPower({a.coeff})"
        return f"SqrtPower({a.coeff} * sqrt({a.base}))"
