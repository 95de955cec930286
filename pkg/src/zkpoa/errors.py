"""Exception hierarchy shared by every layer of the toolkit."""


class PoAError(Exception):
    """Base class for all toolkit errors."""


class DivisionByZero(PoAError, ZeroDivisionError):
    pass


class DomainError(PoAError, ValueError):
    """Evaluation points are duplicated or the domain is too small."""


class FieldMismatch(PoAError, TypeError):
    """Two field elements from different prime fields were combined."""


class SubgroupError(PoAError, ValueError):
    """A point is off the curve or outside the prime-order subgroup."""


class StateError(PoAError, RuntimeError):
    """Operation not allowed in the object's current state."""


class WireError(PoAError, IndexError):
    """A constraint referenced a wire that was never allocated."""


class ShapeError(PoAError, ValueError):
    """Vector or list lengths do not match."""


class NotSatisfiedError(PoAError):
    """An assignment violates at least one constraint."""

    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint


class ExceptionalPointError(PoAError, ArithmeticError):
    """Incomplete addition formula hit P == Q, P == -Q or the identity."""


class CircuitMismatch(PoAError):
    """Keys, proofs or public inputs belong to different circuits."""


class KeyMismatchError(PoAError):
    """A claimed private key does not open the public key it was paired with."""


class ParseError(PoAError, ValueError):
    """Malformed binary or text input."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset
