class FogeError(Exception):
    """
    Base class for every error raised by the toolkit.

    Each error carries the CLI exit code it maps to and a short kind tag used in
    the one-line stderr report.
    """

    exit_code = 3
    kind = "validation"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class FogeValidationError(FogeError, ValueError):
    """Invalid input, parameters or state. Exit code 3."""


class FogeFormatError(FogeError):
    """Unreadable or corrupted binary artifacts. Exit code 2."""

    exit_code = 2
    kind = "io"


class UsageError(FogeError):
    """Bad command-line usage. Exit code 1."""

    exit_code = 1
    kind = "usage"


# Validation errors

class ConfigError(FogeValidationError):
    pass


class InvalidDimensionError(FogeValidationError):
    pass


class DimensionMismatchError(FogeValidationError):
    pass


class ZeroVectorError(FogeValidationError):
    pass


class InvalidParameterError(FogeValidationError):
    pass


class DegenerateInputError(FogeValidationError):
    pass


class EmptyInputError(FogeValidationError):
    pass


class CapacityExceededError(FogeValidationError):
    pass


class VertexOutOfRangeError(FogeValidationError):
    pass


class SelfLoopError(FogeValidationError):
    pass


class DuplicateEdgeError(FogeValidationError):
    pass


class DuplicateMemberError(FogeValidationError):
    pass


class AttributeLengthError(FogeValidationError):
    pass


class UnknownAttributeError(FogeValidationError):
    pass


class DuplicateKeyError(FogeValidationError):
    pass


class MalformedRowError(FogeValidationError):
    pass


class MalformedDocumentError(FogeValidationError):
    pass


class WrongModeError(FogeValidationError):
    pass


class NumericalFailureError(FogeValidationError):
    pass


class TrainingDivergedError(FogeValidationError):
    """
    Raised when the loss of an iterative fit stops being finite.

    Attributes:
    - epoch (int): The epoch at which the non-finite loss was observed.
    - last_finite_loss (float | None): The last finite loss seen before divergence.
    """

    def __init__(self, message: str, epoch: int, last_finite_loss: float | None):
        super().__init__(
            f"{message} (epoch={epoch}, last_finite_loss={last_finite_loss})"
        )
        self.epoch = epoch
        self.last_finite_loss = last_finite_loss


# Format errors

class BadMagicError(FogeFormatError):
    pass


class VersionMismatchError(FogeFormatError):
    pass


class TruncatedFileError(FogeFormatError):
    pass


class FingerprintMismatchError(FogeFormatError):
    pass


class UnknownModeError(FogeFormatError):
    pass
