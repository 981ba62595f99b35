"""Exception and warning types shared across the solver modules."""


class SolverError(Exception):
    """Base class for all diskmag computation failures."""


class InvalidParams(SolverError):
    """Arguments outside an operation's domain of validity."""


class NonConvergence(SolverError):
    """Series summation exceeded its term budget."""


class QuadratureFailure(SolverError):
    """Adaptive quadrature did not reach the requested tolerance."""


class BracketFailure(SolverError):
    """No sign change found on the search interval."""


class NewtonDivergence(SolverError):
    """Damped Newton iteration exhausted its iteration cap."""


class MinimizationFailure(SolverError):
    """Scalar minimizer returned a bracket endpoint."""


class IllConditioned(SolverError):
    """Linear solve residual exceeded the acceptance threshold."""


class InsufficientData(SolverError):
    """A sequence transform was given too few usable entries."""


class SingularPivot(SolverError):
    """Tridiagonal factorization hit an exact zero pivot."""


class NoConvergence(SolverError):
    """Eigenvalue iteration failed to converge."""


class TruncationWarning(UserWarning):
    """Half-line eigenfunction not negligible at the artificial boundary."""
