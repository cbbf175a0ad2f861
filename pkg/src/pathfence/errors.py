"""Exception hierarchy.

Three families matter to callers: ParseError (malformed input), DomainError
(well-formed input outside an operation's domain, or a failed mathematical
check), and PrecisionFault (a computation could not be carried to the
guaranteed truncation order).  The CLI maps them to exit statuses 2, 3, 4.
"""


class PathfenceError(Exception):
    pass


class ParseError(PathfenceError):
    pass


class DomainError(PathfenceError):
    pass


class SlopeConditionViolated(DomainError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class UnsupportedShape(DomainError):
    pass


class TooLarge(DomainError):
    pass


class PreconditionViolated(DomainError):
    pass


class NonUnitConstantTerm(DomainError):
    pass


class NonzeroInnerConstant(DomainError):
    pass


class BadConstantTerm(DomainError):
    pass


class ResidualNonzero(DomainError):
    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class OracleMismatch(DomainError):
    pass


class PrecisionFault(PathfenceError):
    pass


class SingularWithinPrecision(PrecisionFault):
    pass


class NonRationalOutput(PrecisionFault):
    pass


class BranchResidualNonzero(PrecisionFault):
    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class InsufficientOrder(PrecisionFault):
    pass
