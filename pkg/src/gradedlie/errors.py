"""Exception types shared across the package."""


class GradedLieError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(GradedLieError):
    pass


class NonSymmetricError(GradedLieError):
    pass


class NotPositiveDefiniteError(GradedLieError):
    pass


class SingularMatrixError(GradedLieError):
    pass


class ValidationFailureError(GradedLieError):
    """An algebra failed axiom validation; carries the report."""

    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class NotNonPositivelyGradedError(GradedLieError):
    pass


class NotARepresentationError(GradedLieError):
    pass


class NotExactError(GradedLieError):
    pass


class UnknownNameError(GradedLieError):
    pass


class ArgumentNotInNegativePartError(GradedLieError):
    pass


class RangeError(GradedLieError):
    pass


class DegenerateKillingError(GradedLieError):
    pass


class NotAdaptedError(GradedLieError):
    pass


class InvolutionError(GradedLieError):
    pass


class TailDegreeViolationError(GradedLieError):
    pass


class InternalInconsistencyError(GradedLieError):
    """Two independent computation paths disagreed; always a bug."""


class DocumentFormatError(GradedLieError):
    """Malformed input document (schema violation, bad rational string)."""
