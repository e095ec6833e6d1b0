"""Exception hierarchy shared by all fibcirc modules."""


class FibCircError(Exception):
    """Base class for all library errors."""


class InvalidParameters(FibCircError, ValueError):
    """Recurrence or matrix parameters violate a standing assumption."""


class SingularDenominator(FibCircError, ArithmeticError):
    """A closed form was evaluated too close to a vanishing denominator.

    ``factor`` names the vanishing factor so callers can decide whether to
    fall back to an oracle.
    """

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class FallbackUsed(UserWarning):
    """A closed form was replaced by the elimination oracle."""


class UnsupportedCharacter(FibCircError, ValueError):
    def __init__(self, char, position):
        super().__init__(f"unsupported character {char!r} at position {position}")
        self.char = char
        self.position = position


class EmptyMessage(FibCircError, ValueError):
    pass


class InvalidPacket(FibCircError, ValueError):
    """A packet violates its structural invariants."""


class PacketFormatError(InvalidPacket):
    """Serialized packet text could not be parsed.

    ``position`` is a character offset for syntax errors or a JSON path such
    as ``records[0].d`` for schema errors.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
        self.position = position


class CorruptPacket(FibCircError):
    """The recovered entry of a block is non-integral or out of range."""

    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class DegenerateBlock(CorruptPacket):
    """The linear equation for the withheld entry has a zero coefficient."""
