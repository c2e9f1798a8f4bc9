"""Exception types shared across the package."""


class ProcVerifyError(Exception):
    """Base class for all library errors."""


class UnknownState(ProcVerifyError):
    pass


class SizeLimit(ProcVerifyError):
    pass


class StateExplosion(ProcVerifyError):
    def __init__(self, limit, what="states"):
        super().__init__(f"more than {limit} {what}")
        self.limit = limit


class NotAnEquivalence(ProcVerifyError):
    pass


class SemanticsMismatch(ProcVerifyError):
    pass


class UndefinedName(ProcVerifyError):
    pass


class VpTypeError(ProcVerifyError):
    pass


class RangeOverflow(ProcVerifyError):
    pass


class InvariantViolation(ProcVerifyError):
    pass


class VariableClash(ProcVerifyError):
    pass


class MalformedCT(ProcVerifyError):
    pass


class CapacityTooSmall(ProcVerifyError):
    pass


class MalformedFlowchart(ProcVerifyError):
    pass


class LengthMismatch(ProcVerifyError):
    pass


class BadGenerator(ProcVerifyError):
    pass


class UnknownModel(ProcVerifyError):
    pass


class BadParams(ProcVerifyError):
    pass


class ParseError(ProcVerifyError):
    def __init__(self, msg, line=None, col=None):
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.col = col
