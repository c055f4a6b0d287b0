"""Exception hierarchy shared by all modules."""


class PartnerOverlapError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(PartnerOverlapError, ValueError):
    """Operands live in phase spaces of different dimension."""


class InvalidSubspaceError(PartnerOverlapError, ValueError):
    """A basis fails the symplectic orthonormality checks."""


class NonSymplecticSubspaceError(InvalidSubspaceError):
    """The symplectic form restricted to a span is degenerate."""


class PhysicalityError(PartnerOverlapError, ValueError):
    """Covariance matrix violates the uncertainty principle."""

    def __init__(self, message, nu=None):
        super().__init__(message)
        self.nu = nu


class PurityError(PartnerOverlapError, ValueError):
    """Operation requires a pure global state."""


class NoPartnerError(PartnerOverlapError, ValueError):
    """Subsystem is uncorrelated, so it has no purification partner."""


class NearPureReductionError(NoPartnerError):
    """Reduced single-mode state is pure to within tolerance (det J_A ~ 1)."""


class IndependenceError(PartnerOverlapError, ValueError):
    """Two subsystems that should be independent have nonzero symplectic products."""


class InconsistentBlocksError(PartnerOverlapError, ValueError):
    """Two-mode invariants do not describe a physical state."""


class QuadratureError(PartnerOverlapError, RuntimeError):
    """Adaptive quadrature did not converge within its budget."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
