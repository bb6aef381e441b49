"""Headline quantities from computed magnetization series.

Turns the recursion output into the decay-exponent estimate (log-log
least squares), the sandwich constants min/max of sqrt(n) * m_n, a
bisection estimate of the critical inverse temperature from the dynamics
alone, and plain beta scans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
from mpmath import mpf, workprec

from .errors import ClassifierError, ConfigError, DomainError, VerificationFailure
from .numerics import DEFAULT_PRECISION_BITS, fraction_to_mpf, validate_precision
from .params import ModelParams, critical_beta
from .recursion import MagnetizationSeries, collect_series, iterate_gap, iterate_ratio

FIT_MIN_POINTS = 10
DEFAULT_FIT_WINDOW = (1_000, 1_000_000)
GEOMETRIC_RATIO = 1.2

# Sub/supercritical classifier: supercritical iff m at this height exceeds theta.
BETAC_CLASSIFIER_HEIGHT = 100_000
BETAC_THETA = Fraction(1, 100)
BETAC_MIN_TOL = 1e-8


@dataclass(frozen=True)
class FitResult:
    rho_hat: float
    stderr: float
    window: tuple[int, int]
    residual_max: float
    n_points: int

    def __post_init__(self):
        if self.window[0] >= self.window[1]:
            raise DomainError("fit window must satisfy n_min < n_max")
        if self.stderr < 0:
            raise DomainError("standard error cannot be negative")


@dataclass(frozen=True)
class ArmConstants:
    c_hat: mpf
    C_hat: mpf
    window: tuple[int, int]

    def __post_init__(self):
        if not (0 < self.c_hat <= self.C_hat):
            raise DomainError("need 0 < c_hat <= C_hat")


@dataclass(frozen=True)
class BetacResult:
    beta_hat: mpf
    bracket: tuple[mpf, mpf]
    reference: mpf
    deviation: mpf
    classifications: tuple[tuple[float, bool], ...]


def geometric_heights(n_min: int, n_max: int, ratio: float = GEOMETRIC_RATIO) -> list[int]:
    """Geometrically spaced integer heights in [n_min, n_max], deduplicated."""
    if n_min < 1 or n_min > n_max:
        raise DomainError("need 1 <= n_min <= n_max")
    if ratio <= 1:
        raise DomainError("ratio must exceed 1")
    heights = []
    value = float(n_min)
    current = n_min
    while current <= n_max:
        heights.append(current)
        value *= ratio
        current = max(int(round(value)), current + 1)
    return heights


def fit_exponent(series: MagnetizationSeries, window: tuple[int, int]) -> FitResult:
    """Ordinary least squares of log m_n against log n; rho_hat = -slope."""
    lo, hi = window
    if lo >= hi:
        raise DomainError("fit window must satisfy n_min < n_max")
    if not series.rows:
        raise DomainError("series is empty")
    if lo > series.rows[-1].n or hi < series.rows[0].n:
        raise DomainError(
            f"window [{lo}, {hi}] lies outside the series range "
            f"[{series.rows[0].n}, {series.rows[-1].n}]"
        )
    points = [(row.n, row.magnetization) for row in series.rows if lo <= row.n <= hi]
    if len(points) < FIT_MIN_POINTS:
        raise DomainError(f"need at least {FIT_MIN_POINTS} points in the window, got {len(points)}")
    xs = [math.log(n) for n, _ in points]
    ys = [math.log(float(m)) for _, m in points]
    count = len(xs)
    x_mean = sum(xs) / count
    y_mean = sum(ys) / count
    sxx = sum((x - x_mean) ** 2 for x in xs)
    sxy = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    residuals = [y - (slope * x + intercept) for x, y in zip(xs, ys)]
    ssr = sum(r * r for r in residuals)
    stderr = math.sqrt(ssr / (count - 2) / sxx) if count > 2 else 0.0
    return FitResult(
        rho_hat=-slope,
        stderr=stderr,
        window=(lo, hi),
        residual_max=max(abs(r) for r in residuals),
        n_points=count,
    )


def arm_constants(series: MagnetizationSeries, window: tuple[int, int]) -> ArmConstants:
    """Extremes of sqrt(n) * m_n over the window, checked against the envelope.

    The proof's enclosure k1/(2 sqrt(n)) < m_n < k2/sqrt(n) needs
    n > k2^2 = 6 d^2/(d^2 - 1), so the window must start above that.
    """
    from .bounds import BoundEnvelope  # local import to avoid a cycle

    lo, hi = window
    d = series.params.d
    env = BoundEnvelope.critical(d)
    if Fraction(lo) <= env.k_lower_squared:
        raise DomainError(
            f"window start must exceed k2^2 = {env.k_lower_squared} "
            f"(= {float(env.k_lower_squared):.4f}) for d={d}"
        )
    points = [(row.n, row.magnetization) for row in series.rows if lo <= row.n <= hi]
    if not points:
        raise DomainError("window contains no series points")
    bits = series.precision_bits or DEFAULT_PRECISION_BITS
    with workprec(bits):
        values = [mpmath.sqrt(n) * (m if isinstance(m, mpf) else fraction_to_mpf(m)) for n, m in points]
        c_hat = min(values)
        big_c_hat = max(values)
        k1_half = fraction_to_mpf(env.k_upper) / 2
        k2 = env.k_lower(bits)
        if not c_hat > k1_half:
            raise VerificationFailure(
                f"measured c_hat = {c_hat} fails the proof floor k1/2 = {k1_half}"
            )
        if not big_c_hat < k2:
            raise VerificationFailure(
                f"measured C_hat = {big_c_hat} exceeds the proof ceiling k2 = {k2}"
            )
    return ArmConstants(c_hat=c_hat, C_hat=big_c_hat, window=(lo, hi))


@dataclass
class EnclosureReport:
    """Pointwise check of k1/(2 sqrt(n)) < m_n < k2/sqrt(n) for n > k2^2."""

    d: int
    n_start: int
    n_checked: int
    violations: list[tuple]

    @property
    def passed(self) -> bool:
        return not self.violations


def theorem1_enclosure(
    d: int,
    n_max: int,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    collect_heights: Sequence[int] = (),
) -> tuple[EnclosureReport, MagnetizationSeries]:
    """Stream the critical recursion once; check the enclosure at every height.

    Optionally collects (n, r, m) rows at `collect_heights` on the same
    pass, so exponent fits reuse the run.
    """
    from .recursion import SeriesRow  # local import keeps module top tidy

    params = ModelParams.critical(d)
    env_k2_sq = Fraction(6 * d * d, d * d - 1)
    n_start = math.floor(env_k2_sq) + 1
    k1 = 1 - initial_ratio_exact_value(d)
    wanted = set(int(n) for n in collect_heights)
    rows = []
    violations: list[tuple] = []
    checked = 0
    with workprec(precision_bits):
        # strict bounds in squared form: (k1/2)^2 < n * m_n^2 < k2^2
        lower_sq = fraction_to_mpf(k1 * k1 / 4)
        upper_sq = fraction_to_mpf(env_k2_sq)
        for state in iterate_ratio(params, n_max, "float", precision_bits):
            n = state.index + 1
            r = state.value
            m = (1 - r) / (1 + r)
            if n >= n_start:
                q = m * m * n
                if not (lower_sq < q < upper_sq):
                    violations.append((n, m, q))
                checked += 1
            if n in wanted:
                rows.append(SeriesRow(n, r, m))
    series = MagnetizationSeries(params=params, mode="float", precision_bits=precision_bits, rows=rows)
    report = EnclosureReport(d=d, n_start=n_start, n_checked=checked, violations=violations)
    return report, series


def initial_ratio_exact_value(d: int) -> Fraction:
    """Exact critical r_0 without building ModelParams twice."""
    t = Fraction(d + 1, d - 1)
    return Fraction(t**d + t, t ** (d + 1) + 1) ** d


def scan_beta(
    d: int,
    beta_grid: Iterable,
    n: int,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> list[tuple[mpf, mpf]]:
    """m_n for each beta in the grid, rows ordered by beta."""
    if n < 1:
        raise DomainError("height must be >= 1")
    betas = sorted(Fraction(b) for b in beta_grid)
    if not betas:
        raise DomainError("beta grid is empty")
    if betas[0] <= 0:
        raise DomainError("all beta values must be positive")
    out = []
    for beta in betas:
        params = ModelParams.from_beta(d, beta)
        with workprec(precision_bits):
            gap = None
            for gap in iterate_gap(params, n, precision_bits):
                pass
            m = gap / (2 - gap)
            out.append((params.beta_mpf(precision_bits), m))
    return out


def fixed_point_slope(params: ModelParams, precision_bits: int = DEFAULT_PRECISION_BITS):
    """Derivative of the ratio map at its fixed point 1: d (b - 1)/(b + 1).

    Equals d * tanh(beta); exactly 1 at criticality in exact mode.
    """
    d = params.d
    if params.is_exact:
        b = params.b_fraction
        return Fraction(d) * (b - 1) / (b + 1)
    with workprec(precision_bits):
        b = params.b_mpf(precision_bits)
        return d * (b - 1) / (b + 1)


def _classify_supercritical(
    params: ModelParams,
    precision_bits: int,
    max_height: int,
    theta: Fraction,
) -> bool:
    """True iff m at the classification height exceeds theta.

    Exploits monotonicity of the orbit: once m has dropped below theta it
    stays below (m is non-increasing along the run), and once the gap is
    stationary to working precision the final verdict is already decided.
    """
    with workprec(precision_bits):
        theta_f = fraction_to_mpf(theta)
        station = mpf(2) ** (4 - precision_bits)
        prev = None
        m = None
        for gap in iterate_gap(params, max_height, precision_bits):
            m = gap / (2 - gap)
            if prev is not None:
                if gap <= prev and m < theta_f:
                    return False
                if abs(gap - prev) <= abs(gap) * station:
                    return m > theta_f
            prev = gap
        return m > theta_f


def estimate_betac(
    d: int,
    tol: float,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    max_height: int = BETAC_CLASSIFIER_HEIGHT,
    theta: Fraction = BETAC_THETA,
) -> BetacResult:
    """Bisection for the critical inverse temperature from the dynamics alone.

    A beta is called supercritical iff the magnetization at the
    classification height exceeds theta; the bracket midpoint is returned
    once the bracket is narrower than tol.  This is a heuristic
    classifier validated against atanh(1/d), not a proof.
    """
    if not isinstance(d, int) or d < 2:
        raise DomainError(f"branching number d must be an integer >= 2, got {d!r}")
    if tol < BETAC_MIN_TOL:
        raise ConfigError(f"tol must be >= {BETAC_MIN_TOL}")
    validate_precision(precision_bits)
    trace: list[tuple[float, bool]] = []

    def classify(beta: Fraction) -> bool:
        verdict = _classify_supercritical(
            ModelParams.from_beta(d, beta), precision_bits, max_height, theta
        )
        trace.append((float(beta), verdict))
        return verdict

    hi = Fraction(1)
    if not classify(hi):
        raise ClassifierError("beta = 1 was not classified supercritical; cannot bracket")
    lo = hi / 2
    while classify(lo):
        hi = lo
        lo = lo / 2
        if lo < Fraction(1, 10**9):
            raise ClassifierError("failed to find a subcritical bracket endpoint")
    tol_frac = Fraction(tol)
    while hi - lo > tol_frac:
        mid = (lo + hi) / 2
        if classify(mid):
            hi = mid
        else:
            lo = mid
    # a consistent trace has every subcritical beta below every supercritical one
    subs = [b for b, s in trace if not s]
    sups = [b for b, s in trace if s]
    if subs and sups and max(subs) >= min(sups):
        raise ClassifierError(
            f"classifier is not monotone: subcritical {max(subs)} >= supercritical {min(sups)}"
        )
    with workprec(precision_bits):
        beta_hat = fraction_to_mpf((lo + hi) / 2)
        reference, _ = critical_beta(d, precision_bits)
        deviation = abs(beta_hat - reference)
        lo_f = fraction_to_mpf(lo)
        hi_f = fraction_to_mpf(hi)
    return BetacResult(
        beta_hat=beta_hat,
        bracket=(lo_f, hi_f),
        reference=reference,
        deviation=deviation,
        classifications=tuple(trace),
    )


def critical_series(
    d: int,
    window: tuple[int, int] = DEFAULT_FIT_WINDOW,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    ratio: float = GEOMETRIC_RATIO,
) -> MagnetizationSeries:
    """Geometrically sampled critical series covering the fit window."""
    heights = geometric_heights(window[0], window[1], ratio)
    return collect_series(ModelParams.critical(d), heights, "float", precision_bits)
