"""Exception hierarchy shared by all jetvar modules."""


class JetvarError(Exception):
    """Base class for every error raised by jetvar."""


class DecrementBelowZero(JetvarError, ValueError):
    pass


class DimensionMismatch(JetvarError, ValueError):
    pass


class ExprSyntaxError(JetvarError, ValueError):
    """Malformed expression text; ``pos`` is the 0-based character offset."""

    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class UnknownIdentifier(JetvarError, ValueError):
    pass


class OrderExceeded(JetvarError, ValueError):
    pass


class MissingAssignment(JetvarError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "missing assignment"


class OpaqueAtomPresent(JetvarError, ValueError):
    pass


class DomainError(JetvarError, ValueError):
    pass


class ZeroContactDegree(JetvarError, ValueError):
    pass


class OrderLowering(JetvarError, ValueError):
    pass


class JetVariablePresent(JetvarError, ValueError):
    pass


class BidegreeMismatch(JetvarError, ValueError):
    pass


class NotLagrangian(JetvarError, ValueError):
    pass


class IdentityCheckFailed(JetvarError, AssertionError):
    pass


class ProblemSyntaxError(JetvarError, ValueError):
    """Problem-file error tied to a 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class OrderMismatch(ProblemSyntaxError):
    pass


class DuplicateName(ProblemSyntaxError):
    pass


class UnsupportedFormat(JetvarError, ValueError):
    pass
