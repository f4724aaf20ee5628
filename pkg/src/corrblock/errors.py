"""Exception types shared across the package."""


class CorrBlockError(Exception):
    """Base class for all package errors."""


class GeometryError(CorrBlockError, ValueError):
    """Invalid or degenerate geometric input."""


class InfeasibleScenarioError(CorrBlockError, ValueError):
    """Inputs that cannot describe a valid blocking scenario.

    Raised for blocking regions larger than the deployment region, correlation
    coefficients outside the range allowed by the marginals, and similar.
    """


class DegenerateMarginalError(InfeasibleScenarioError):
    """A marginal blocking probability is exactly 0 or 1."""


class ConfigError(CorrBlockError, ValueError):
    """Malformed scenario configuration."""
