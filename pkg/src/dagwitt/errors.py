"""Exception hierarchy shared by all modules."""


class DagwittError(Exception):
    """Base class for every error raised by the package."""


class NotDivisible(DagwittError):
    pass


class PrecisionExhausted(DagwittError):
    pass


class PrecisionBudgetExceeded(PrecisionExhausted):
    pass


class NotAUnit(DagwittError):
    pass


class RingMismatch(DagwittError):
    pass


class RankMismatch(DagwittError):
    pass


class DepthExceeded(DagwittError):
    pass


class NonTerminating(DagwittError):
    """Rewriting exceeded its step budget. Always a bug signal."""


class NotIntegrable(DagwittError):
    pass


class SliceMismatch(DagwittError):
    pass


class InvalidFrobeniusLift(NotDivisible):
    pass


class ParseError(DagwittError):
    pass
