"""Ratio recursion for the root magnetization on rooted Cayley trees.

The whole finite-volume computation is carried by a single scalar, the
ratio r_n of the two boundary-generating sums.  With b = e^{2*beta} it
obeys

    r_0 = ((t**d + t) / (t**(d+1) + 1))**d,      t = e^{2*beta}
    r_{n+1} = g(r_n),   g(z) = ((b*z + 1) / (b + z))**d

and the height-(n+1) root magnetization with plus boundary is
(1 - r_n) / (1 + r_n).  The map g fixes z = 1 and is strictly increasing
on (0, 1], so orbits are monotone; the iterator asserts that at runtime.

Direct evaluation of the two generating sums (`xy_direct`) exists only as
a small-height oracle: their digit counts grow like d**n, so everything
else iterates the ratio alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

import mpmath
from mpmath import mpf, workprec

from .errors import DomainError, ModeError, PrecisionFailure, SizeGuardError
from .numerics import (
    DEFAULT_PRECISION_BITS,
    SqrtPower,
    fraction_to_mpf,
    validate_precision,
)
from .params import ModelParams, max_exact_index

EXACT = "exact"
FLOAT = "float"


def _resolve_mode(params: ModelParams, mode: str | None) -> str:
    if mode is None:
        return EXACT if params.is_exact else FLOAT
    if mode not in (EXACT, FLOAT):
        raise ModeError(f"mode must be 'exact' or 'float', got {mode!r}")
    if mode == EXACT and not params.is_exact:
        raise ModeError("exact mode requires a rational t = e^(2*beta); this beta is float-only")
    return mode


@dataclass(frozen=True)
class RatioState:
    """The ratio r_n together with its recursion index.

    `value` lies in (0, 1); the value 1 is tolerated only as a synthetic
    input to the map (the fixed point), never produced from a valid r_0.
    `precision_bits` is None in exact mode.
    """

    index: int
    value: Fraction | mpf
    precision_bits: int | None = None

    def __post_init__(self):
        if self.index < 0:
            raise DomainError("index must be non-negative")
        if not (0 < self.value <= 1):
            raise DomainError(f"ratio must lie in (0, 1], got {self.value}")

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, Fraction)


@dataclass(frozen=True)
class XYPair:
    """Directly recursed generating-sum pair at one index, exact.

    The true values are rational only up to integer powers of sqrt(t)
    (for odd d at odd index they carry one), so they are stored as
    `SqrtPower` values; any common rescaling leaves the contractual
    quantities -- the ratio and the magnetization -- unchanged.
    """

    index: int
    x: SqrtPower
    y: SqrtPower

    @property
    def ratio(self) -> Fraction:
        # x and y always share the same power of sqrt(t), which cancels.
        return Fraction(self.y.coeff, self.x.coeff)


class SeriesRow(NamedTuple):
    n: int                      # tree height, >= 1
    ratio: Fraction | mpf       # r_{n-1}
    magnetization: Fraction | mpf


@dataclass
class MagnetizationSeries:
    params: ModelParams
    mode: str
    precision_bits: int | None
    rows: list[SeriesRow]

    def heights(self) -> list[int]:
        return [row.n for row in self.rows]


# ---------------------------------------------------------------------------
# the map and its orbit
# ---------------------------------------------------------------------------

def initial_ratio(
    params: ModelParams,
    mode: str | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> RatioState:
    """r_0 = ((t**d + t) / (t**(d+1) + 1))**d in the requested representation."""
    mode = _resolve_mode(params, mode)
    d = params.d
    if mode == EXACT:
        t = params.b_fraction
        value = (Fraction(t**d + t, t ** (d + 1) + 1)) ** d
        return RatioState(index=0, value=value)
    validate_precision(precision_bits)
    with workprec(precision_bits + 16):
        t = params.b_mpf(precision_bits + 16)
        value = ((t**d + t) / (t ** (d + 1) + 1)) ** d
    with workprec(precision_bits):
        value = +value
    return RatioState(index=0, value=value, precision_bits=precision_bits)


def _apply_map(value, b, d: int):
    return ((b * value + 1) / (b + value)) ** d


def g_step(r: RatioState, params: ModelParams) -> RatioState:
    """One application of g(z) = ((b*z + 1)/(b + z))**d, preserving representation."""
    if not (0 < r.value <= 1):
        raise DomainError(f"g is applied on (0, 1], got {r.value}")
    if r.is_exact:
        b = params.b_fraction
        return RatioState(index=r.index + 1, value=_apply_map(r.value, b, params.d))
    bits = r.precision_bits or DEFAULT_PRECISION_BITS
    with workprec(bits):
        value = _apply_map(r.value, params.b_mpf(bits), params.d)
    return RatioState(index=r.index + 1, value=value, precision_bits=bits)


def _check_guard(params: ModelParams, top_index: int):
    limit = max_exact_index(params.d)
    if top_index > limit:
        raise SizeGuardError(
            f"exact mode is limited to recursion index {limit} for d={params.d} "
            f"(digit count grows like d**n); requested {top_index}. "
            "Use float mode for long runs."
        )


def _iter_exact(params: ModelParams, n_max: int) -> Iterator[Fraction]:
    d = params.d
    b = params.b_fraction
    r = initial_ratio(params, EXACT).value
    prev = None
    increasing = None
    for _ in range(n_max):
        if not (0 < r < 1):
            raise PrecisionFailure(f"ratio left (0, 1): {r}")
        if prev is not None:
            if params.is_critical and r <= prev:
                raise PrecisionFailure("critical orbit failed to increase strictly")
            if increasing is None and r != prev:
                increasing = r > prev
            if (increasing and r < prev) or (increasing is False and r > prev):
                raise PrecisionFailure("orbit reversed direction")
        yield r
        prev = r
        r = _apply_map(r, b, d)


def _iter_float(params: ModelParams, n_max: int, precision_bits: int) -> Iterator[mpf]:
    d = params.d
    critical = params.is_critical
    with workprec(precision_bits):
        b = params.b_mpf(precision_bits)
        r = initial_ratio(params, FLOAT, precision_bits).value
        one = mpf(1)
        prev = None
        increasing = None
        for _ in range(n_max):
            if not (0 < r < one):
                raise PrecisionFailure(
                    f"ratio left (0, 1) at {precision_bits} bits: {mpmath.nstr(r, 20)}. "
                    "Deep subcritical runs saturate the ratio at 1; raise precision_bits "
                    "or use iterate_gap/collect_series, which track 1 - r stably."
                )
            if prev is not None:
                if critical and r <= prev:
                    raise PrecisionFailure(
                        f"critical orbit failed to increase strictly at {precision_bits} bits; "
                        "raise the precision"
                    )
                if increasing is None and r != prev:
                    increasing = r > prev
                if (increasing and r < prev) or (increasing is False and r > prev):
                    raise PrecisionFailure("orbit reversed direction; precision exhausted")
            yield r
            prev = r
            r = ((b * r + 1) / (b + r)) ** d


def _gap_initial(params: ModelParams, precision_bits: int) -> mpf:
    """1 - r_0 without cancellation, valid even for beta within a few ulp of 0.

    1 - r_0 = (B**d - A**d) / B**d with A = t**d + t, B = t**(d+1) + 1, and
    B - A = (t - 1)(t**d - 1); both small factors come from expm1/log1p.
    """
    d = params.d
    with workprec(precision_bits + 16):
        tm1 = params.b_minus_one_mpf(precision_bits + 16)
        t = 1 + tm1
        tdm1 = mpmath.expm1(d * mpmath.log1p(tm1))  # t**d - 1
        a = tdm1 + 1 + t
        b = (tdm1 + 1) * t + 1
        cross = mpmath.mpf(0)
        for i in range(d):
            cross += b**i * a ** (d - 1 - i)
        gap = tm1 * tdm1 * cross / b**d
    with workprec(precision_bits):
        return +gap


def iterate_gap(params: ModelParams, n_max: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> Iterator[mpf]:
    """Yield the gaps 1 - r_k, numerically stable deep into the subcritical regime.

    One step of the ratio map sends the gap e to 1 - ((b + 1 - b*e)/(b + 1 - e))**d,
    evaluated as -expm1(d * log1p(-delta)) with delta = (b - 1) e / (b + 1 - e),
    so gaps far below one ulp of 1 stay meaningful.  Yields raw mpf values.
    """
    d = params.d
    with workprec(precision_bits):
        bm1 = params.b_minus_one_mpf(precision_bits)
        bp1 = bm1 + 2
        gap = _gap_initial(params, precision_bits)
        for _ in range(n_max):
            if not (0 < gap < 1):
                raise PrecisionFailure(f"gap left (0, 1): {mpmath.nstr(gap, 20)}")
            yield gap
            delta = bm1 * gap / (bp1 - gap)
            gap = -mpmath.expm1(d * mpmath.log1p(-delta))


def iterate_ratio(
    params: ModelParams,
    n_max: int,
    mode: str | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> Iterator[RatioState]:
    """Stream r_0, r_1, ..., r_{n_max-1} without ever forming the huge sums."""
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    mode = _resolve_mode(params, mode)
    if n_max == 0:
        return
    if mode == EXACT:
        _check_guard(params, n_max - 1)
        for idx, value in enumerate(_iter_exact(params, n_max)):
            yield RatioState(index=idx, value=value)
    else:
        validate_precision(precision_bits)
        for idx, value in enumerate(_iter_float(params, n_max, precision_bits)):
            yield RatioState(index=idx, value=value, precision_bits=precision_bits)


def magnetization_rooted(r: RatioState):
    """Root magnetization (1 - r)/(1 + r) at height index+1, same representation as r."""
    value = r.value if isinstance(r, RatioState) else r
    if not (0 < value <= 1):
        raise DomainError(f"ratio must lie in (0, 1], got {value}")
    if isinstance(value, Fraction):
        return (1 - value) / (1 + value)
    bits = r.precision_bits if isinstance(r, RatioState) and r.precision_bits else mpmath.mp.prec
    with workprec(bits):
        return (1 - value) / (1 + value)


def magnetization_regular(r: RatioState, d: int):
    """Root magnetization on the (d+1)-regular tree: (1 - r**((d+1)/d)) / (1 + ...).

    Float-only: the d-th root is irrational in general.
    """
    if isinstance(r, RatioState) and r.is_exact or isinstance(r, Fraction):
        raise ModeError("regular-tree magnetization takes d-th roots; use float mode")
    value = r.value if isinstance(r, RatioState) else r
    if not (0 < value <= 1):
        raise DomainError(f"ratio must lie in (0, 1], got {value}")
    bits = r.precision_bits if isinstance(r, RatioState) and r.precision_bits else mpmath.mp.prec
    with workprec(bits):
        power = value ** (mpf(d + 1) / d)
        return (1 - power) / (1 + power)


# ---------------------------------------------------------------------------
# small-height direct recursion (oracle)
# ---------------------------------------------------------------------------

def xy_direct(params: ModelParams, n: int) -> XYPair:
    """The generating-sum pair at index n by direct recursion, exact.

    Uses the rescaled integer recursion

        A_0 = x_0 = (t**(d+1) + 1)**d / t**(d(d+1)/2)   (a plain rational),
        A_{k} = (t*A_{k-1} + B_{k-1})**d,  scale gains t**(-d/2) per step,

    so the stored pair is the true (x_n, y_n) including its sqrt(t) power.
    """
    if n < 0:
        raise DomainError("index must be non-negative")
    if not params.is_exact:
        raise ModeError("xy_direct is an exact-mode oracle; beta must come as rational t")
    limit = max_exact_index(params.d)
    if n > limit:
        raise SizeGuardError(
            f"xy_direct is limited to n <= {limit} for d={params.d} (digits grow like d**n)"
        )
    d = params.d
    t = params.b_fraction
    scale0 = t ** (d * (d + 1) // 2)
    a = (t ** (d + 1) + 1) ** d / scale0
    b = (t**d + t) ** d / scale0
    half = 0
    for _ in range(n):
        a, b = (t * a + b) ** d, (t * b + a) ** d
        half = d * half - d
    return XYPair(index=n, x=SqrtPower(a, half, t), y=SqrtPower(b, half, t))


# ---------------------------------------------------------------------------
# series assembly
# ---------------------------------------------------------------------------

def collect_series(
    params: ModelParams,
    heights: Iterable[int],
    mode: str | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> MagnetizationSeries:
    """Run the recursion once and keep (n, r_{n-1}, m_n) for the requested heights."""
    wanted = sorted(set(int(n) for n in heights))
    if wanted and wanted[0] < 1:
        raise DomainError("heights must be >= 1")
    mode = _resolve_mode(params, mode)
    rows: list[SeriesRow] = []
    if wanted:
        want = set(wanted)
        top = wanted[-1]
        if mode == FLOAT and not params.is_critical:
            # gap tracking survives ratio saturation in the subcritical regime
            validate_precision(precision_bits)
            with workprec(precision_bits):
                for idx, gap in enumerate(iterate_gap(params, top, precision_bits)):
                    n = idx + 1
                    if n in want:
                        rows.append(SeriesRow(n, 1 - gap, gap / (2 - gap)))
        else:
            for state in iterate_ratio(params, top, mode, precision_bits):
                n = state.index + 1
                if n in want:
                    rows.append(SeriesRow(n, state.value, magnetization_rooted(state)))
    return MagnetizationSeries(
        params=params,
        mode=mode,
        precision_bits=precision_bits if mode == FLOAT else None,
        rows=rows,
    )
