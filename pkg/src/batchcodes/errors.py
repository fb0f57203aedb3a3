"""Exception types raised across the package."""


class BatchCodeError(ValueError):
    """Base class for all domain errors."""


class NotPrimePower(BatchCodeError):
    pass


class BlockSizeTooLarge(BatchCodeError):
    pass


class QTooSmall(BatchCodeError):
    pass


class TooLarge(BatchCodeError):
    """The requested exact enumeration exceeds the configured size guard."""


class OutOfRange(BatchCodeError):
    pass


class MatrixFormatError(BatchCodeError):
    pass
