"""Exception types raised across the package."""


class QisflowError(Exception):
    """Base class for all package errors."""


class DimMismatch(QisflowError, ValueError):
    pass


class EigNoConverge(QisflowError, ArithmeticError):
    def __init__(self, residual, sweeps):
        super().__init__(f"Jacobi did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")
        self.residual = residual
        self.sweeps = sweeps


class BoundaryRho(QisflowError, ValueError):
    """Density matrix is not in the interior (min eigenvalue at or below the floor)."""


class BoundaryTheta(QisflowError, ValueError):
    pass


class NotInSm(QisflowError, ValueError):
    """Sphere point lies on (or too close to) a coordinate hyperplane."""


class DegenerateUpdate(QisflowError, ArithmeticError):
    pass


class BoundaryReached(QisflowError):
    """QIS integration left the interior. ``trajectory`` holds the valid prefix."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class ConfigError(QisflowError, ValueError):
    def __init__(self, field, reason):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason
