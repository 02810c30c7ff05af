"""Error and warning types shared across the package."""


class ConfigError(ValueError):
    """Invalid run configuration, surface parameters, or argument combination."""


class DomainError(ValueError):
    """Mathematical input outside the domain of the requested quantity."""


class DegenerateChart(ValueError):
    """Chart metric is singular or orientation-degenerate at the evaluation point."""


class SingularInversion(ValueError):
    """Inversion center lies on (or numerically on) the surface."""


class GridError(ValueError):
    """Quadrature grid unusable for operator assembly."""


class NumericalError(ArithmeticError):
    """Non-finite values or a numerically failed linear-algebra step."""


class NotPositiveDefinite(NumericalError):
    """Single-layer quadratic form lost positivity at this resolution."""


class PoleError(ZeroDivisionError):
    """Spectral value sits on a pole of the requested transform."""


class TopologyWarning(UserWarning):
    """Integrated topological quantity is suspiciously far from an integer."""
