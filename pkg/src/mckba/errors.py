"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class MCKBAError(Exception):
    exit_code = 1


class ParseError(MCKBAError):
    exit_code = 3


class BadBlockWidth(MCKBAError):
    exit_code = 4


class EmptyImage(MCKBAError):
    exit_code = 5


class LengthMismatch(MCKBAError):
    exit_code = 6


class BadDimensions(MCKBAError):
    exit_code = 7


class InvalidKey(MCKBAError):
    exit_code = 8


class UnresolvableBit(MCKBAError):
    exit_code = 9

    def __init__(self, bit, element=None):
        self.bit = bit
        self.element = element
        where = f" at element {element}" if element is not None else ""
        super().__init__(f"no observation determines bit {bit}{where}")


class AmbiguousKeyUsage(MCKBAError):
    exit_code = 10


class CorruptEquivalentKey(MCKBAError):
    exit_code = 11


class UndecidableHypothesis(MCKBAError):
    exit_code = 12

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence or []


class DegenerateState(MCKBAError):
    exit_code = 13


class InsufficientData(MCKBAError):
    exit_code = 14
