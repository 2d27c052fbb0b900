"""Exception hierarchy.

Two families, matching the CLI exit codes: :class:`DomainError` (bad input,
exit code 2) and :class:`NumericalError` (a computation hit a pole, a singular
pivot, or lost definiteness, exit code 3).
"""


class CornerDetError(Exception):
    """Base class for all package errors."""


class DomainError(CornerDetError, ValueError):
    """Input outside the domain of an operation."""


class ParseError(DomainError):
    """A symbol, corner or complex literal could not be parsed."""


class ShapeError(DomainError):
    """Matrix or block dimensions do not fit together."""


class UnsupportedSymbolError(DomainError):
    """The requested quantity is not available for this kind of symbol."""


class NumericalError(CornerDetError, ArithmeticError):
    """A numerical procedure broke down."""


class PoleError(NumericalError):
    """A Gamma function was evaluated at a nonpositive integer."""


class SingularMatrixError(NumericalError):
    """LU elimination met a zero pivot."""

    def __init__(self, pivot_index, message=None):
        self.pivot_index = pivot_index
        super().__init__(message or f"matrix is singular (zero pivot at index {pivot_index})")


class DefinitenessError(NumericalError):
    """The Levinson recursion produced a reflection coefficient of modulus >= 1."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"positive definiteness lost at Verblunsky index {index}")


class DivergenceError(NumericalError):
    """A series that should converge does not."""


class FormulaInapplicableError(NumericalError):
    """A closed-form reconstruction needs a quantity that is (numerically) zero."""
