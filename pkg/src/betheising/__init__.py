"""Critical root magnetization of the ferromagnetic Ising model on rooted Cayley trees.

Exact-rational and high-precision-float ratio recursion, a brute-force
enumeration oracle, verification of the square-root sandwich and its
proof-chain inequalities, and decay-exponent estimation.
"""

__version__ = "0.1.0"

from .analysis import (
    ArmConstants,
    BetacResult,
    FitResult,
    arm_constants,
    estimate_betac,
    fit_exponent,
    fixed_point_slope,
    geometric_heights,
    scan_beta,
    theorem1_enclosure,
)
from .bounds import (
    BoundEnvelope,
    SandwichReport,
    F_func,
    G_poly,
    Q_func,
    R_func,
    S_func,
    check_sandwich,
    f_comparison,
    factor_positivity_check,
    k_threshold,
    lemma3_envelope,
    run_sandwich,
)
from .errors import (
    BetheIsingError,
    ClassifierError,
    ConfigError,
    DomainError,
    ModeError,
    PrecisionFailure,
    SizeGuardError,
    VerificationFailure,
)
from .numerics import DEFAULT_PRECISION_BITS, SqrtPower, format_scalar
from .oracle import (
    FiniteTree,
    SpinConfig,
    build_tree,
    hamiltonian_plus,
    partition_function,
    root_magnetization_bruteforce,
)
from .params import ModelParams, critical_b, critical_beta
from .polynomials import IntPolynomial
from .recursion import (
    MagnetizationSeries,
    RatioState,
    XYPair,
    collect_series,
    g_step,
    initial_ratio,
    iterate_ratio,
    magnetization_regular,
    magnetization_rooted,
    xy_direct,
)

__all__ = [name for name in dir() if not name.startswith("_")]
