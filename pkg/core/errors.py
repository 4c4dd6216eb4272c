from typing import Optional, Tuple

__all__ = [
    "UEntropyError", "InvalidGamma", "InvalidScale", "NegativeArgument", "BadGrid",
    "NoConvergence", "DegenerateInput", "UnboundedAbove", "InvalidProbVector",
    "LengthMismatch", "TooLarge", "NotAbsolutelyContinuous", "NotNormalized",
    "InvalidAlpha", "SelfCheckFailed", "InversionError", "UndefinedArithmetic",
    "InputParseError", "DescriptorError",
]


class UEntropyError(Exception):
    """Base class for every domain error raised by the library."""


class InvalidGamma(UEntropyError):
    pass


class InvalidScale(UEntropyError):
    pass


class NegativeArgument(UEntropyError):
    pass


class BadGrid(UEntropyError):
    pass


class NoConvergence(UEntropyError):

    def __init__(self, message: str, bracket: Optional[Tuple[float, float]] = None, iterations: int = 0):
        super().__init__(message)
        self.bracket = bracket
        self.iterations = iterations


class DegenerateInput(UEntropyError):
    pass


class UnboundedAbove(UEntropyError):
    pass


class InvalidProbVector(UEntropyError):

    def __init__(self, message: str, total: Optional[float] = None):
        super().__init__(message)
        self.total = total


class LengthMismatch(UEntropyError):
    pass


class TooLarge(UEntropyError):
    pass


class NotAbsolutelyContinuous(UEntropyError):
    pass


class NotNormalized(UEntropyError):
    pass


class InvalidAlpha(UEntropyError):
    pass


class SelfCheckFailed(UEntropyError):
    pass


class InversionError(UEntropyError):
    pass


class UndefinedArithmetic(UEntropyError):
    pass


class InputParseError(UEntropyError):
    """Malformed vector input; line and column are 1-based."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DescriptorError(UEntropyError):
    pass
