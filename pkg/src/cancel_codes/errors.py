"""Exception hierarchy shared by every module of the package."""


class CancelCodesError(Exception):
    """Base class for all errors raised by cancel_codes."""


class NotAPrimePower(CancelCodesError, ValueError):
    pass


class NoPrimePower(CancelCodesError, ValueError):
    pass


class DivisionByZero(CancelCodesError, ZeroDivisionError):
    pass


class ShapeError(CancelCodesError, ValueError):
    pass


class BadShape(CancelCodesError, ValueError):
    pass


class UniverseTooSmall(CancelCodesError, ValueError):
    pass


class SearchExhausted(CancelCodesError, RuntimeError):
    def __init__(self, message, partition=None):
        super().__init__(message)
        self.partition = partition


class DuplicateMembers(CancelCodesError, ValueError):
    pass


class NotUniform(CancelCodesError, ValueError):
    pass


class NotThreeUniform(NotUniform):
    pass


class NotSparse(CancelCodesError, ValueError):
    pass


class OutOfRegime(CancelCodesError, ValueError):
    pass


class GroundSetTooLarge(CancelCodesError, ValueError):
    pass


class FormatError(CancelCodesError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
