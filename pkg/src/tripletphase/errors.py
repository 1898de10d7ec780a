"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TripletPhaseError(Exception):
    """Base class for all library errors."""


class InputError(TripletPhaseError, ValueError):
    """Caller supplied malformed or out-of-range input."""


# exactnum
class SingularMatrix(TripletPhaseError, ArithmeticError):
    pass


class OrderMismatch(InputError):
    pass


class CompositeOrder(InputError):
    pass


# laurent
class ShapeMismatch(InputError):
    pass


class ZeroPolynomial(InputError):
    pass


class ZeroCoordinate(InputError):
    pass


class PolynomialSyntaxError(InputError):
    """Raised by the text parsers; ``offset`` is the 0-based character position."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownVariable(InputError):
    pass


# group / univdenom
class RequiresNAtLeast3(InputError):
    pass


class NotDegreeZero(InputError):
    pass


class BudgetExceeded(TripletPhaseError):
    pass


# symfun
class IndexOutOfRange(InputError):
    pass


class NotSymmetric(InputError):
    pass


# observables
class UndefinedSymbol(InputError):
    pass


class DenominatorVanishes(TripletPhaseError, ZeroDivisionError):
    pass


# sagbi
class NotInvariant(InputError):
    pass


class NotInSemigroup(InputError):
    pass


class InitialExponentNotInS(TripletPhaseError):
    pass


class UnsupportedN(InputError):
    pass


# reduction / cli
class SingularR(SingularMatrix):
    """The Gram matrix of the shifted ratio basis is singular at this point."""


class MissingObservable(InputError):
    def __init__(self, missing):
        self.missing = sorted(missing)
        listed = ", ".join(str(m) for m in self.missing)
        super().__init__(f"missing observables: {listed}")


class ZeroMagnitude(InputError):
    pass


class FileFormatError(InputError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = f"{path or '<input>'}:{line}: " if line is not None else ""
        super().__init__(where + message)


# witness
class NoWitnessFound(TripletPhaseError):
    pass
