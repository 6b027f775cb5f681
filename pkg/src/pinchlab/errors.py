"""Exception types shared across the package.

The CLI maps these onto process exit codes, so library code should raise
the most specific class that applies instead of bare ValueError/RuntimeError.
"""

from __future__ import annotations


class PinchlabError(Exception):
    """Base class for everything raised deliberately by this package."""


class ConfigError(PinchlabError):
    """Bad experiment configuration (missing keys, wrong types, bad ranges)."""


class DomainError(PinchlabError):
    """A point or vector lies outside the chart domain of a model."""


class DegeneratePlaneError(PinchlabError):
    """Tangent plane with (numerically) linearly dependent spanning vectors."""


class IntegrationError(PinchlabError):
    """Adaptive integrator failed (step-size underflow, exploding state)."""


class ConvergenceError(PinchlabError):
    """An iterative solve did not reach its target residual."""


class NumericalError(PinchlabError):
    """A closed-form evaluation left its valid range beyond rounding slack."""


class ScanError(PinchlabError):
    """A sampling scan produced too many failures to be trustworthy."""


class ValidationError(PinchlabError):
    """Computed results violate a declared validation rule."""
