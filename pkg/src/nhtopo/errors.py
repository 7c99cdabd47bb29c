"""Exception types shared across the package."""


class NhtopoError(Exception):
    """Base class for all package errors."""


class GaplessOrCriticalError(NhtopoError):
    """Raised when the decay-mode selection boundary is degenerate.

    A magnitude tie between the last kept root and the first dropped root
    signals a topological transition (or a gapless bulk), so the
    thermodynamic-limit construction is ill-defined at this parameter point.
    """

    def __init__(self, beta_kept, beta_dropped, sector=None):
        self.beta_kept = beta_kept
        self.beta_dropped = beta_dropped
        self.sector = sector
        where = f" in sector {sector}" if sector is not None else ""
        super().__init__(
            f"selection boundary tie{where}: |{beta_kept:.12g}| == "
            f"|{beta_dropped:.12g}| within tolerance; the model sits at a "
            "transition or a gapless point"
        )


class NotQuantizedError(NhtopoError):
    """Eigenvalues of the chiral reflection matrix are not close to +/-1."""


class SymmetryViolationError(NhtopoError):
    """A required symmetry check failed (missing operator or broken relation)."""


class SingularMatrixError(NhtopoError):
    """A matrix that must be inverted is singular or too ill-conditioned."""


class NonConvergentError(NhtopoError):
    """An iteration or extrapolation failed to settle within its budget."""


class BudgetExceededError(NhtopoError):
    """A requested dense computation exceeds the configured size budget."""
