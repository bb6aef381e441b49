"""Bound functions of the critical analysis and their verification sweeps.

At criticality the ratio sequence is sandwiched between two square-root
envelopes,

    1 - k1/sqrt(n)  >=  r_{n-1}  >=  1 - k2/sqrt(n),
    k1 = 1 - r_0 (exact rational),   k2 = sqrt(6) * d / sqrt(d^2 - 1),

and the induction behind that sandwich runs through a threshold function
K (the unique potentially-positive root of a comparison polynomial), an
upper-bound function F on [1, oo), an exactly factorizable integer
polynomial G, and the derivative chain Q, R, S.  This module evaluates
all of them and provides the fixed verification grids.

Inequality checks use a slack band of 2^-64: violations must clear the
band, and |slack| inside it is reported as a near-tie rather than a pass
(the upper envelope is mathematically tight at n = 1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath
from mpmath import mpf, workprec

from .errors import DomainError, SizeGuardError, VerificationFailure
from .numerics import (
    DEFAULT_PRECISION_BITS,
    NEAR_TIE_EPS,
    fraction_to_mpf,
    validate_precision,
)
from .params import ModelParams
from .polynomials import IntPolynomial, divide_out_one_minus_z
from .recursion import RatioState, initial_ratio, iterate_ratio

# ---------------------------------------------------------------------------
# documented verification grids (fixed for reproducibility)
# ---------------------------------------------------------------------------

GRID_SEED = 20250810
PROP5_SAMPLES = 400
PROP5_D_MAX = 6
PROP5_N_MAX = 10_000
PROP67_D_VALUES = tuple(range(2, 11))
PROP67_N_MAX = 100_000
PROP7_K_VALUES = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1, 1))
CLAIM8_D_VALUES = (2, 3, 5)
CLAIM8_K_VALUES = (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10))
CLAIM8_N_POWERS = 21  # n = 1, 2, 4, ..., 2^20
CLAIM8_LIMIT_N = 10**8
S_GRID_D_VALUES = tuple(range(2, 11))
S_GRID_N_MAX = 100
S_GRID_K_VALUES = tuple(Fraction(i, 20) for i in range(1, 20))
FSIGN_SAMPLES = 60
FSIGN_GRID_POINTS = 1500
FACTORIZATION_D_MAX = 200


# ---------------------------------------------------------------------------
# envelope
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundEnvelope:
    """Constants of the two-sided square-root envelope at criticality.

    `k_upper` drives the upper envelope 1 - k_upper/sqrt(n) (exact),
    `k_lower_squared` = 6 d^2 / (d^2 - 1) is the exact square of the
    lower-envelope constant, and below `trivial_regime_cutoff` the lower
    bound is reported as 0 (it is nonpositive there).
    """

    d: int
    k_upper: Fraction
    k_lower_squared: Fraction
    trivial_regime_cutoff: int

    def __post_init__(self):
        if not (0 < self.k_upper < 1):
            raise DomainError(f"k_upper must lie in (0, 1), got {self.k_upper}")
        if self.k_lower_squared <= 1:
            raise DomainError("k_lower must exceed 1")
        if self.trivial_regime_cutoff < 6:
            raise DomainError("trivial-regime cutoff must be at least 6")

    @classmethod
    def critical(cls, d: int) -> "BoundEnvelope":
        r0 = initial_ratio(ModelParams.critical(d), "exact").value
        k2_sq = Fraction(6 * d * d, d * d - 1)
        cutoff = -((-k2_sq.numerator) // k2_sq.denominator)  # ceil
        return cls(d=d, k_upper=1 - r0, k_lower_squared=k2_sq, trivial_regime_cutoff=cutoff)

    def k_lower(self, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
        with workprec(precision_bits):
            return mpmath.sqrt(fraction_to_mpf(self.k_lower_squared))


def lemma3_envelope(
    env: BoundEnvelope, n: int, precision_bits: int = DEFAULT_PRECISION_BITS
) -> tuple[mpf, mpf]:
    """(lower, upper) bounds for r_{n-1}; lower is 0 in the trivial regime."""
    if n < 1:
        raise DomainError("height must be >= 1")
    validate_precision(precision_bits)
    with workprec(precision_bits):
        sqrt_n = mpmath.sqrt(n)
        upper = 1 - fraction_to_mpf(env.k_upper) / sqrt_n
        if n <= env.trivial_regime_cutoff:
            lower = mpf(0)
        else:
            lower = 1 - env.k_lower(precision_bits) / sqrt_n
        return lower, upper


@dataclass
class SandwichReport:
    """Outcome of checking a ratio series against the envelope."""

    d: int
    n_checked: int
    violations: list[tuple]            # (n, r, lower, upper)
    near_ties: list[tuple]             # (n, side, slack)
    min_slack_lower: mpf | None
    min_slack_upper: mpf | None

    @property
    def passed(self) -> bool:
        return not self.violations


def check_sandwich(
    series: Iterable[RatioState],
    env: BoundEnvelope,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> SandwichReport:
    """Verify lower <= r_{n-1} <= upper for every state of the series."""
    validate_precision(precision_bits)
    violations: list[tuple] = []
    near_ties: list[tuple] = []
    min_lo = None
    min_up = None
    checked = 0
    with workprec(precision_bits):
        tie = fraction_to_mpf(NEAR_TIE_EPS)
        k1 = fraction_to_mpf(env.k_upper)
        k2 = env.k_lower(precision_bits)
        cutoff = env.trivial_regime_cutoff
        for state in series:
            r = state.value if isinstance(state.value, mpf) else fraction_to_mpf(state.value)
            n = state.index + 1
            sqrt_n = mpmath.sqrt(n)
            upper = 1 - k1 / sqrt_n
            lower = 1 - k2 / sqrt_n if n > cutoff else mpf(0)
            up_slack = upper - r
            lo_slack = r - lower
            if up_slack < -tie or lo_slack < -tie:
                violations.append((n, r, lower, upper))
            else:
                if abs(up_slack) <= tie:
                    near_ties.append((n, "upper", up_slack))
                if abs(lo_slack) <= tie:
                    near_ties.append((n, "lower", lo_slack))
            min_up = up_slack if min_up is None else min(min_up, up_slack)
            min_lo = lo_slack if min_lo is None else min(min_lo, lo_slack)
            checked += 1
    return SandwichReport(
        d=env.d,
        n_checked=checked,
        violations=violations,
        near_ties=near_ties,
        min_slack_lower=min_lo,
        min_slack_upper=min_up,
    )


def run_sandwich(
    d: int,
    n_max: int,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    inject_fault: bool = False,
) -> SandwichReport:
    """Iterate the critical ratio to n_max heights and check the envelope.

    `inject_fault` replaces r_0 by 1 - 1e-9 to demonstrate that the
    harness actually detects violations.
    """
    env = BoundEnvelope.critical(d)
    params = ModelParams.critical(d)
    states = iterate_ratio(params, n_max, "float", precision_bits)
    if inject_fault:
        def faulty(src):
            for state in src:
                if state.index == 0:
                    with workprec(precision_bits):
                        yield RatioState(0, mpf(1) - mpf("1e-9"), precision_bits)
                else:
                    yield state
        states = faulty(states)
    return check_sandwich(states, env, precision_bits)


# ---------------------------------------------------------------------------
# threshold function and comparison polynomial
# ---------------------------------------------------------------------------

def k_threshold(d: int, n, k, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
    """Threshold K separating ratios whose image under g stays below 1 - k/sqrt(n).

    K = [-(d+1)u + (d-1)] / [(d-1)u - (d+1)] with u = (1 - k/sqrt(n))^(1/d).
    The denominator is negative for every admissible input; that is
    asserted at runtime.
    """
    if not isinstance(d, int) or d < 2:
        raise DomainError(f"branching number d must be an integer >= 2, got {d!r}")
    if n < 1:
        raise DomainError("n must be >= 1")
    validate_precision(precision_bits)
    with workprec(precision_bits):
        kk = fraction_to_mpf(k) if isinstance(k, Fraction) else mpf(k)
        if kk <= 0:
            raise DomainError("k must be positive")
        sqrt_n = mpmath.sqrt(n)
        if kk > sqrt_n:
            raise DomainError(f"k must satisfy k <= sqrt(n); got k={kk}, n={n}")
        u = mpmath.root(1 - kk / sqrt_n, d)
        den = (d - 1) * u - (d + 1)
        if not den < 0:
            raise DomainError("threshold denominator must be negative")
        return (-(d + 1) * u + (d - 1)) / den


def f_comparison(d: int, n, k, z, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
    """Comparison polynomial whose unique potentially-positive root is K.

    f(z) = [(d+1)z + (d-1)]^d - [(d-1)z + (d+1)]^d
           + (k/sqrt(n)) [(d-1)z + (d+1)]^d
    """
    validate_precision(precision_bits)
    with workprec(precision_bits):
        kk = fraction_to_mpf(k) if isinstance(k, Fraction) else mpf(k)
        zz = fraction_to_mpf(z) if isinstance(z, Fraction) else mpf(z)
        lo = ((d - 1) * zz + (d + 1)) ** d
        return ((d + 1) * zz + (d - 1)) ** d - lo + kk / mpmath.sqrt(n) * lo


# ---------------------------------------------------------------------------
# closed-form bound functions
# ---------------------------------------------------------------------------

def F_func(d: int, r, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
    """Upper-bound comparison function on r >= 1; nonpositive throughout.

    F(r) = 2 sqrt(d^2 (6 r^2 - 1) + 1) ((1 - 1/r)^(1/d) - 1)
           + sqrt(6) ((-d + 1)(1 - 1/r)^(1/d) + (d + 1))
    """
    if not isinstance(d, int) or d < 2:
        raise DomainError(f"branching number d must be an integer >= 2, got {d!r}")
    validate_precision(precision_bits)
    with workprec(precision_bits):
        rr = fraction_to_mpf(r) if isinstance(r, Fraction) else mpf(r)
        if rr < 1:
            raise DomainError(f"F is defined on r >= 1, got {rr}")
        w = mpmath.root(1 - 1 / rr, d)
        s = 2 * mpmath.sqrt(d * d * (6 * rr * rr - 1) + 1)
        return s * (w - 1) + mpmath.sqrt(6) * ((-d + 1) * w + (d + 1))


def G_poly(d: int) -> IntPolynomial:
    """Exact integer polynomial of degree 2d + 2 behind the F <= 0 sweep.

    G(z) = 4 (1 - z)^2 (-d^2 (z^{2d} - 2 z^d - 5) + (z^d - 1)^2)
           - 6 (z^d - 1)^2 ((-d + 1) z + (d + 1))^2
    """
    if not isinstance(d, int) or d < 2:
        raise DomainError(f"branching number d must be an integer >= 2, got {d!r}")
    if d > FACTORIZATION_D_MAX:
        raise SizeGuardError(f"G polynomial construction is guarded to d <= {FACTORIZATION_D_MAX}")
    one = IntPolynomial.constant(1)
    z = IntPolynomial.monomial(1)
    zd = IntPolynomial.monomial(d)
    z2d = IntPolynomial.monomial(2 * d)
    zd_minus_1_sq = (zd - one) ** 2
    inner = -(d * d) * (z2d - 2 * zd - 5 * one) + zd_minus_1_sq
    linear = IntPolynomial((d + 1, 1 - d))
    g = 4 * (one - z) ** 2 * inner - 6 * zd_minus_1_sq * linear**2
    if g.degree != 2 * d + 2:
        raise AssertionError(f"G should have degree {2*d + 2}, got {g.degree}")
    return g


def factor_positivity_check(p: IntPolynomial) -> IntPolynomial:
    """Exact division by (1 - z)^5 plus strict positivity of the quotient.

    Returns the quotient; raises VerificationFailure with the offending
    degree when the remainder is nonzero or a coefficient fails to be a
    strictly positive integer.
    """
    quotient = divide_out_one_minus_z(p, 5)
    for i, c in enumerate(quotient.coeffs):
        if c <= 0:
            raise VerificationFailure(
                f"quotient coefficient at degree {i} is {c}; expected strictly positive"
            )
    return quotient


# ---------------------------------------------------------------------------
# derivative chain Q, R, S
# ---------------------------------------------------------------------------

def Q_func(d: int, k, n, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
    """Q(n) = (d(k - 2 sqrt(n-1)) - k) (((sqrt(n) - k)/sqrt(n))^(1/d) - 1) - 2k.

    Nonpositive and increasing in n on [1, oo) for 0 < k < 1; tends to 0.
    """
    if not isinstance(d, int) or d < 2:
        raise DomainError(f"branching number d must be an integer >= 2, got {d!r}")
    validate_precision(precision_bits)
    with workprec(precision_bits):
        kk = fraction_to_mpf(k) if isinstance(k, Fraction) else mpf(k)
        nn = fraction_to_mpf(n) if isinstance(n, Fraction) else mpf(n)
        if not (0 < kk < 1):
            raise DomainError(f"k must lie in (0, 1), got {kk}")
        if nn < 1:
            raise DomainError(f"n must be >= 1, got {nn}")
        sqrt_n = mpmath.sqrt(nn)
        base = (sqrt_n - kk) / sqrt_n
        return (d * (kk - 2 * mpmath.sqrt(nn - 1)) - kk) * (mpmath.root(base, d) - 1) - 2 * kk


def R_func(d: int, n, k, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
    """Derivative of Q with respect to n, in closed form.

    Identically zero at k = 0; for k > 0 the formula divides by
    sqrt(n - 1), so n must exceed 1 (the one-sided limit at n = 1 is
    +infinity).
    """
    if not isinstance(d, int) or d < 2:
        raise DomainError(f"branching number d must be an integer >= 2, got {d!r}")
    validate_precision(precision_bits)
    with workprec(precision_bits):
        kk = fraction_to_mpf(k) if isinstance(k, Fraction) else mpf(k)
        nn = fraction_to_mpf(n) if isinstance(n, Fraction) else mpf(n)
        if not (0 <= kk < 1):
            raise DomainError(f"k must lie in [0, 1), got {kk}")
        if kk == 0:
            if nn < 1:
                raise DomainError(f"n must be >= 1, got {nn}")
            return mpf(0)
        if nn <= 1:
            raise DomainError("the closed form divides by sqrt(n - 1); need n > 1 for k > 0")
        sqrt_n = mpmath.sqrt(nn)
        sqrt_n1 = mpmath.sqrt(nn - 1)
        base = (sqrt_n - kk) / sqrt_n
        term1 = (
            (mpf(1) / d)
            * (1 / (2 * nn) - (sqrt_n - kk) / (2 * nn**mpf("1.5")))
            * (d * (kk - 2 * sqrt_n1) - kk)
            * base ** (mpf(1) / d - 1)
        )
        term2 = (d / sqrt_n1) * (mpmath.root(base, d) - 1)
        return term1 - term2


def S_func(d: int, n, k, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpf:
    """Sign factor of dR/dk; positive on 0 < k < 1 and nonnegative at k = 1.

    S = -d^2 k^2 sqrt(n-1) - 2 d^2 k n + 2 d^2 k sqrt(n-1) sqrt(n)
        + 2 d^2 sqrt(n) + 2 d k n - 2 d k sqrt(n-1) sqrt(n) - 2 d k
        + k^2 sqrt(n-1)
    """
    if not isinstance(d, int) or d < 2:
        raise DomainError(f"branching number d must be an integer >= 2, got {d!r}")
    validate_precision(precision_bits)
    with workprec(precision_bits):
        kk = fraction_to_mpf(k) if isinstance(k, Fraction) else mpf(k)
        nn = fraction_to_mpf(n) if isinstance(n, Fraction) else mpf(n)
        if not (0 <= kk <= 1):
            raise DomainError(f"k must lie in [0, 1], got {kk}")
        if nn < 1:
            raise DomainError(f"n must be >= 1, got {nn}")
        sqrt_n = mpmath.sqrt(nn)
        sqrt_n1 = mpmath.sqrt(nn - 1)
        d2 = d * d
        return (
            -d2 * kk * kk * sqrt_n1
            - 2 * d2 * kk * nn
            + 2 * d2 * kk * sqrt_n1 * sqrt_n
            + 2 * d2 * sqrt_n
            + 2 * d * kk * nn
            - 2 * d * kk * sqrt_n1 * sqrt_n
            - 2 * d * kk
            + kk * kk * sqrt_n1
        )


# ---------------------------------------------------------------------------
# verification sweeps over the documented grids
# ---------------------------------------------------------------------------

@dataclass
class SuiteReport:
    name: str
    checked: int
    violations: list = field(default_factory=list)
    near_ties: int = 0
    min_margin: object = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def merge_margin(self, margin):
        if self.min_margin is None or margin < self.min_margin:
            self.min_margin = margin


def _critical_map(z, b, d: int):
    return ((b * z + 1) / (b + z)) ** d


def prop5_equivalence_suite(
    samples: int = PROP5_SAMPLES,
    seed: int = GRID_SEED,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> SuiteReport:
    """Random check of both directions of z <= K  <=>  g(z) <= 1 - k/sqrt(n)."""
    rng = random.Random(seed)
    report = SuiteReport(name="prop5-equivalence", checked=0)
    with workprec(precision_bits):
        tie = fraction_to_mpf(NEAR_TIE_EPS)
        while report.checked < samples:
            d = rng.randint(2, PROP5_D_MAX)
            n = rng.randint(1, PROP5_N_MAX)
            # K > 0 needs 1 - k/sqrt(n) > ((d-1)/(d+1))^d
            u_min = fraction_to_mpf(Fraction(d - 1, d + 1) ** d)
            frac = rng.uniform(0.02, 0.98)
            k = mpmath.sqrt(n) * (1 - (u_min + frac * (1 - u_min)))
            z = mpf(rng.uniform(1e-6, 1 - 1e-6))
            threshold = k_threshold(d, n, k, precision_bits)
            if threshold <= 0 or abs(z - threshold) <= tie:
                continue
            b = fraction_to_mpf(Fraction(d + 1, d - 1))
            bound = 1 - k / mpmath.sqrt(n)
            image = _critical_map(z, b, d)
            left = z <= threshold
            right = image <= bound
            if left != right and abs(image - bound) > tie:
                report.violations.append((d, n, k, z, threshold, image, bound))
            report.merge_margin(abs(image - bound))
            report.checked += 1
    return report


def prop6_threshold_suite(
    d_values: Iterable[int] = PROP67_D_VALUES,
    n_max: int = PROP67_N_MAX,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> SuiteReport:
    """K at the lower-envelope constant stays below 1 - k2/sqrt(n-1).

    The stated hypothesis is n >= 6 d^2/(d^2 - 1); whether the integer
    boundary point itself satisfies the bound is recorded in the notes
    (both conventions), strict checking starts one above the cutoff.
    """
    report = SuiteReport(name="prop6-upper-bound", checked=0)
    boundary_notes = {}
    d_values = tuple(d_values)
    with workprec(precision_bits):
        tie = fraction_to_mpf(NEAR_TIE_EPS)
        per_d = []
        min_cutoff = None
        for d in d_values:
            env = BoundEnvelope.critical(d)
            k2 = env.k_lower(precision_bits)
            cutoff = env.trivial_regime_cutoff
            if env.k_lower_squared <= cutoff:
                thr = k_threshold(d, cutoff, k2, precision_bits)
                rhs = 1 - k2 / mpmath.sqrt(cutoff - 1)
                boundary_notes[f"d={d},n={cutoff}"] = "holds" if thr <= rhs + tie else "fails"
            per_d.append((d, k2, cutoff))
            min_cutoff = cutoff if min_cutoff is None else min(min_cutoff, cutoff)
        # n outer so sqrt(n) is shared across the d sweep
        prev_sqrt = mpmath.sqrt(min_cutoff)
        for n in range(min_cutoff + 1, n_max + 1):
            sqrt_n = mpmath.sqrt(n)
            for d, k2, cutoff in per_d:
                if n <= cutoff:
                    continue
                dm1, dp1 = d - 1, d + 1
                u = mpmath.root(1 - k2 / sqrt_n, d)
                thr = (-dp1 * u + dm1) / (dm1 * u - dp1)
                rhs = 1 - k2 / prev_sqrt
                margin = rhs - thr
                if margin < -tie:
                    report.violations.append((d, n, thr, rhs))
                report.merge_margin(margin)
                report.checked += 1
            prev_sqrt = sqrt_n
    report.notes["boundary_convention"] = boundary_notes
    return report


def prop7_threshold_suite(
    d_values: Iterable[int] = PROP67_D_VALUES,
    n_max: int = PROP67_N_MAX,
    k_values: Iterable[Fraction] = PROP7_K_VALUES,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> SuiteReport:
    """K(k) >= 1 - k/sqrt(n-1) for all sampled k <= 1 and 2 <= n <= n_max."""
    report = SuiteReport(name="prop7-lower-bound", checked=0)
    d_values = tuple(d_values)
    ks = [fraction_to_mpf(k, precision_bits) for k in k_values]
    with workprec(precision_bits):
        tie = fraction_to_mpf(NEAR_TIE_EPS)
        prev_sqrt = mpmath.sqrt(1)
        for n in range(2, n_max + 1):
            sqrt_n = mpmath.sqrt(n)
            for k in ks:
                bases = 1 - k / sqrt_n
                rhs = 1 - k / prev_sqrt
                for d in d_values:
                    dm1, dp1 = d - 1, d + 1
                    u = mpmath.root(bases, d)
                    thr = (-dp1 * u + dm1) / (dm1 * u - dp1)
                    margin = thr - rhs
                    if margin < -tie:
                        report.violations.append((d, n, float(k), thr, rhs))
                    report.merge_margin(margin)
                    report.checked += 1
            prev_sqrt = sqrt_n
    return report


def claim8_suite(precision_bits: int = DEFAULT_PRECISION_BITS) -> SuiteReport:
    """Q is nonpositive, increasing along a doubling n-grid, and vanishes at infinity."""
    report = SuiteReport(name="claim8-q-monotone", checked=0)
    with workprec(precision_bits):
        tie = fraction_to_mpf(NEAR_TIE_EPS)
        for d in CLAIM8_D_VALUES:
            for k in CLAIM8_K_VALUES:
                prev = None
                for i in range(CLAIM8_N_POWERS):
                    n = 1 << i
                    q = Q_func(d, k, n, precision_bits)
                    if q > tie:
                        report.violations.append((d, float(k), n, "positive", q))
                    if prev is not None and q < prev - tie:
                        report.violations.append((d, float(k), n, "not-increasing", q - prev))
                    if prev is not None:
                        report.merge_margin(q - prev)
                    prev = q
                    report.checked += 1
        limit_value = Q_func(2, Fraction(1, 2), CLAIM8_LIMIT_N, precision_bits)
        report.notes["limit_abs_q"] = limit_value
        if abs(limit_value) >= mpf("0.01"):
            report.violations.append((2, 0.5, CLAIM8_LIMIT_N, "limit", limit_value))
        report.checked += 1
    return report


def r_s_suite(precision_bits: int = DEFAULT_PRECISION_BITS) -> SuiteReport:
    """R vanishes at k = 0, R matches a finite difference of Q, S(k) > S(1) >= 0."""
    report = SuiteReport(name="r-s-derivative-chain", checked=0)
    with workprec(precision_bits):
        tie = fraction_to_mpf(NEAR_TIE_EPS)
        for d in S_GRID_D_VALUES:
            for n in (2, 10, 100, 1000):
                if R_func(d, n, 0, precision_bits) != 0:
                    report.violations.append((d, n, "R(0) != 0"))
                small = abs(R_func(d, n, Fraction(1, 10**8), precision_bits))
                if small > mpf("1e-6"):
                    report.violations.append((d, n, "R not continuous at k=0", small))
                report.checked += 2
        # R against a central difference of Q in n
        h = Fraction(1, 10**4)
        fd = (Q_func(2, Fraction(1, 2), Fraction(10) + h, precision_bits)
              - Q_func(2, Fraction(1, 2), Fraction(10) - h, precision_bits)) / (2 * fraction_to_mpf(h))
        closed = R_func(2, 10, Fraction(1, 2), precision_bits)
        rel = abs(fd - closed) / abs(closed)
        report.notes["r_fd_relative_error"] = rel
        if rel > mpf("1e-6"):
            report.violations.append((2, 10, 0.5, "R vs finite difference", rel))
        report.checked += 1
        # S positivity grid
        for d in S_GRID_D_VALUES:
            for n in range(1, S_GRID_N_MAX + 1):
                s_one = S_func(d, n, 1, precision_bits)
                if s_one < -tie:
                    report.violations.append((d, n, "S(1) < 0", s_one))
                report.merge_margin(s_one)
                report.checked += 1
                for k in S_GRID_K_VALUES:
                    s_k = S_func(d, n, k, precision_bits)
                    if s_k <= s_one + tie:
                        report.violations.append((d, n, float(k), "S(k) <= S(1)", s_k - s_one))
                    report.checked += 1
    return report


def f_sign_structure_suite(
    samples: int = FSIGN_SAMPLES,
    seed: int = GRID_SEED + 1,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> SuiteReport:
    """Sign structure of the comparison polynomial on (0, 1).

    f(0) < 0, f(1) = (k/sqrt(n)) 2^d d^d exactly, and a dense grid plus
    bisection finds exactly one sign change, located at K.
    """
    rng = random.Random(seed)
    report = SuiteReport(name="f-sign-structure", checked=0)
    with workprec(precision_bits):
        while report.checked < samples:
            d = rng.randint(2, PROP5_D_MAX)
            n = rng.randint(1, PROP5_N_MAX)
            u_min = (Fraction(d - 1, d + 1)) ** d
            frac = rng.uniform(0.05, 0.95)
            k = mpmath.sqrt(n) * (1 - (fraction_to_mpf(u_min) + frac * (1 - fraction_to_mpf(u_min))))
            threshold = k_threshold(d, n, k, precision_bits)
            if threshold <= 0 or threshold >= 1:
                continue
            f0 = f_comparison(d, n, k, 0, precision_bits)
            if not f0 < 0:
                report.violations.append((d, n, "f(0) >= 0", f0))
            f1 = f_comparison(d, n, k, 1, precision_bits)
            f1_closed = k / mpmath.sqrt(n) * (2**d) * (d**d)
            if abs(f1 - f1_closed) > abs(f1_closed) * mpf(2) ** (-precision_bits + 8):
                report.violations.append((d, n, "f(1) != closed form", f1, f1_closed))
            sign_changes = 0
            bracket = None
            prev_z, prev_f = mpf(0), f0
            for i in range(1, FSIGN_GRID_POINTS + 1):
                z = mpf(i) / FSIGN_GRID_POINTS
                fz = f_comparison(d, n, k, z, precision_bits)
                if prev_f < 0 <= fz or prev_f >= 0 > fz:
                    sign_changes += 1
                    bracket = (prev_z, z)
                prev_z, prev_f = z, fz
            if sign_changes != 1:
                report.violations.append((d, n, "sign changes", sign_changes))
            elif not (bracket[0] <= threshold <= bracket[1]):
                report.violations.append((d, n, "K outside sign-change bracket", threshold, bracket))
            else:
                lo, hi = bracket
                for _ in range(90):
                    mid = (lo + hi) / 2
                    if f_comparison(d, n, k, mid, precision_bits) < 0:
                        lo = mid
                    else:
                        hi = mid
                root = (lo + hi) / 2
                err = abs(root - threshold)
                report.merge_margin(-err)
                if err > mpf("1e-20"):
                    report.violations.append((d, n, "bisection root differs from K", err))
            report.checked += 1
    return report


def factorization_suite(d_max: int = FACTORIZATION_D_MAX) -> SuiteReport:
    """Exact factorization G = (1 - z)^5 * (strictly positive integer polynomial)."""
    if d_max > FACTORIZATION_D_MAX:
        raise SizeGuardError(f"factorization sweep is guarded to d <= {FACTORIZATION_D_MAX}")
    report = SuiteReport(name="g-factorization", checked=0)
    expected = {2: (30, 18), 3: (88, 168, 120, 56)}
    for d in range(2, d_max + 1):
        try:
            quotient = factor_positivity_check(G_poly(d))
        except VerificationFailure as exc:
            report.violations.append((d, str(exc)))
            report.checked += 1
            continue
        if quotient.degree != 2 * d - 3:
            report.violations.append((d, f"quotient degree {quotient.degree} != {2*d - 3}"))
        if d in expected and quotient.coeffs != expected[d]:
            report.violations.append((d, f"quotient {quotient.coeffs} != {expected[d]}"))
        report.checked += 1
    return report


def grid_suites(precision_bits: int = DEFAULT_PRECISION_BITS, n_max: int = PROP67_N_MAX) -> list[SuiteReport]:
    """All inequality sweeps on their documented grids."""
    return [
        prop5_equivalence_suite(precision_bits=precision_bits),
        prop6_threshold_suite(n_max=n_max, precision_bits=precision_bits),
        prop7_threshold_suite(n_max=n_max, precision_bits=precision_bits),
        claim8_suite(precision_bits=precision_bits),
        r_s_suite(precision_bits=precision_bits),
        f_sign_structure_suite(precision_bits=precision_bits),
    ]
