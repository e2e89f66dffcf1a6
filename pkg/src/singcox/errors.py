"""Exception hierarchy shared by every module of the package."""


class CoxeterError(Exception):
    """Base class for all errors raised by singcox."""


class InvalidMatrix(CoxeterError):
    pass


class NonFinite(CoxeterError):
    """The system (or a requested parabolic) is not finite, or exceeds the cap."""


class NotAGenerator(CoxeterError):
    pass


class MismatchedMiddle(CoxeterError):
    """Composition of an (I, J)-coset with a (J', K)-coset where J != J'."""


class MalformedExpression(CoxeterError):
    pass


class BarObstruction(CoxeterError):
    """A rotation sequence was requested for (S, s, t) with t equal to bar(s)."""


class NotCore(CoxeterError):
    pass


class BadDescent(CoxeterError):
    pass


class NotAdmissible(CoxeterError):
    pass


class WrongCorank(CoxeterError):
    pass


class BarMismatch(CoxeterError):
    pass


class Budget(CoxeterError):
    """A search exceeded its configured vertex or element budget."""
