"""Exception hierarchy shared by the library and the CLI."""


class GapError(Exception):
    """Base class for all rmtgap errors."""


class DomainError(GapError, ValueError):
    """Argument outside the documented domain of a special function."""


class PoleError(DomainError):
    """Gamma function evaluated at a non-positive integer."""


class ParameterError(GapError, ValueError):
    """Ensemble or family parameters violate a documented constraint."""


class NumericalError(GapError, ArithmeticError):
    """Base class for failures of a numerical route."""


class SeedInconsistencyError(NumericalError):
    """Boundary seed does not satisfy its second-degree ODE."""


class SingularityError(NumericalError):
    """Trajectory ran into a movable singularity or a vanishing denominator."""


class ToleranceError(NumericalError):
    """Residual of the second-degree ODE exceeded tolerance after refinement."""


class CoverageError(NumericalError):
    """Requested integration range is not covered by a trajectory."""


class BlowUpError(NumericalError):
    """Transcendent or Hamiltonian trajectory left its bounded region."""


class OrderTooLowError(NumericalError):
    """Quadrature or Nystrom order did not self-converge."""


class ConditioningError(NumericalError):
    """Moment matrix too ill-conditioned for the Gram-determinant route."""


class ResolutionError(NumericalError):
    """Tensor quadrature did not converge under node doubling."""
