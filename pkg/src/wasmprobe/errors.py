"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class WasmProbeError(Exception):
    pass


class DecodeError(WasmProbeError):
    """Malformed binary input. `offset` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class MalformedMagic(DecodeError):
    pass


class TruncatedSection(DecodeError):
    pass


class UnknownOpcode(DecodeError):
    pass


class OutOfBoundsIndex(DecodeError):
    pass


class EncodeError(WasmProbeError):
    """Module cannot be expressed in the binary format (e.g. >1 result)."""


class ValidationError(WasmProbeError):
    """Ill-typed code. `location` is a (func, instr) pair when known."""

    def __init__(self, message: str, location=None):
        self.location = location
        if location is not None:
            message = f"{message} at {location}"
        super().__init__(message)


class TypeMismatch(ValidationError):
    def __init__(self, message: str, location=None, expected=None, actual=None):
        self.expected = expected
        self.actual = actual
        super().__init__(message, location)


class StackUnderflow(ValidationError):
    pass


class BranchLabelOutOfRange(ValidationError):
    pass


class UnbalancedEnd(ValidationError):
    pass


class InstrumentError(WasmProbeError):
    pass
