"""Exception hierarchy shared by all modules."""


class FracBurgersError(Exception):
    """Base class for every error raised by this package."""


class InvalidTerm(FracBurgersError, ValueError):
    """A monomial term carries a non-finite coefficient or exponent."""


class NonExactDivision(FracBurgersError, ArithmeticError):
    """Division by X would leave the monomial basis (needs X^-1)."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class NotReal(FracBurgersError, ValueError):
    """Evaluation produced an imaginary residue above tolerance."""


class DomainError(FracBurgersError, ValueError):
    """Coordinates or orders outside the admissible domain."""


class NotSeparable(FracBurgersError, ValueError):
    """A single-variable transform was requested for a mixed expression."""


class AbscissaError(FracBurgersError, ValueError):
    """Transform parameter too close to the convergence abscissa."""


class MissingComponent(FracBurgersError, IndexError):
    """An Adomian polynomial needs a series component that is not there."""


class SingularStepError(FracBurgersError):
    """The singular recursion produced a term outside the basis."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class InvalidProblem(FracBurgersError, ValueError):
    """A problem description violates its structural invariants."""
