"""Exception hierarchy shared by every module."""


class ProbAlgError(Exception):
    """Base class for all library errors."""


class ForeignEvent(ProbAlgError):
    """An event or subalgebra was combined with objects of another algebra."""


class InvalidAlgebra(ProbAlgError):
    """Atom weights are not strictly positive or do not sum to 1."""


class EmptyTuple(ProbAlgError):
    pass


class NotAPartition(ProbAlgError):
    pass


class BadLength(ProbAlgError):
    pass


class LengthMismatch(ProbAlgError):
    pass


class OddLength(ProbAlgError):
    pass


class NotCoarsening(ProbAlgError):
    pass


class ValueOutOfRange(ProbAlgError):
    pass


class InvalidDescriptor(ProbAlgError):
    pass


class UnboundVariable(ProbAlgError):
    pass


class AtomCapExceeded(ProbAlgError):
    pass


class UnsupportedConnective(ProbAlgError):
    pass


class UnknownSymbol(ProbAlgError):
    pass


class FormulaSyntaxError(ProbAlgError):
    """Raised by the parser; ``position`` is a 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
