"""Exception hierarchy shared by every loud_cycles module."""


class LoudCyclesError(Exception):
    """Base exception for all loud_cycles failures."""

    pass


class KernelError(LoudCyclesError):
    """Raised when the exact trigonometric kernel rejects an operation."""

    pass


class SystemDefinitionError(LoudCyclesError):
    """Raised for unknown systems, unsupported degrees or non-canonical fields."""

    pass


class NonCenterError(SystemDefinitionError):
    """Raised when a piecewise combination is not a center for the given line."""

    pass


class ExpansionError(LoudCyclesError):
    """Raised when a jet expansion cannot be carried out as requested."""

    pass


class InvariantViolation(ExpansionError):
    """Raised when a computed jet breaks a structural invariant."""

    pass


class LadderError(LoudCyclesError):
    """Raised when the independence ladder cannot be built."""

    pass


class BlowupError(LoudCyclesError):
    """Raised when a blow-up substitution does not produce the declared structure."""

    pass


class ConvergenceError(LoudCyclesError):
    """Raised when Newton iteration on an h-system does not converge."""

    pass


class TransversalityError(LoudCyclesError):
    """Raised when a solution cannot be certified as transversal."""

    pass


class NumericIntegrationError(LoudCyclesError):
    """Raised when the numeric flow oracle fails to produce a half-return."""

    pass


class SlidingError(NumericIntegrationError):
    """Raised when a trajectory meets the switching line tangentially."""

    pass


class EscapeError(NumericIntegrationError):
    """Raised when a trajectory leaves the validated annulus."""

    pass


class StageError(LoudCyclesError):
    """Raised when a pipeline stage fails; names the stage and the contract."""

    def __init__(self, stage: str, contract: str, cause: str = "") -> None:
        self.stage = stage
        self.contract = contract
        self.cause = cause
        message = f"stage '{stage}' failed: {contract}"
        if cause:
            message += f" ({cause})"
        super().__init__(message)


class SummaryMismatchError(LoudCyclesError):
    """Raised when the summary table differs from the expected counts."""

    pass
