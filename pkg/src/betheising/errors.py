"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: configuration/usage problems
(DomainError, ModeError, SizeGuardError, ConfigError) exit with 2,
failed verifications and numeric breakdowns exit with 1.
"""


class BetheIsingError(Exception):
    """Base class for all package errors."""


class DomainError(BetheIsingError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ModeError(BetheIsingError, ValueError):
    """Exact arithmetic was requested where only floats are possible (or vice versa)."""


class SizeGuardError(BetheIsingError, ValueError):
    """A computation was refused because it would exceed the documented size guards."""


class ConfigError(BetheIsingError, ValueError):
    """Invalid run configuration (precision bits, digits, tolerances, ...)."""


class PrecisionFailure(BetheIsingError, ArithmeticError):
    """A runtime numeric sanity check failed (ratio left (0,1), monotonicity broke)."""


class VerificationFailure(BetheIsingError):
    """An exact or numeric verification check did not hold."""


class ClassifierError(BetheIsingError):
    """The sub/supercritical classifier produced an inconsistent bisection trace."""
