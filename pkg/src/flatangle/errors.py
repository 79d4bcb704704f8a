"""Exception hierarchy.

Every error carries a stable ``exit_code`` used by the command line driver.
"""


class FlatAngleError(Exception):
    exit_code = 1


class MalformedInput(FlatAngleError):
    exit_code = 2


class InconsistentGluing(FlatAngleError):
    exit_code = 3


class InvalidEdge(InconsistentGluing):
    """An edge is identified with itself in reverse."""


class NonOrientable(FlatAngleError):
    exit_code = 4


class ReferenceMismatch(FlatAngleError):
    exit_code = 5


class StructureMismatch(ReferenceMismatch):
    pass


class IllegalSite(FlatAngleError):
    exit_code = 6


class NotADiagonal(FlatAngleError):
    exit_code = 7


class NotFlippable(FlatAngleError):
    exit_code = 7


class MismatchedPolygon(FlatAngleError):
    exit_code = 7


class IllegalMoveInSequence(FlatAngleError):
    exit_code = 7


class UncoveredBaseEdge(FlatAngleError):
    exit_code = 7


class PreconditionViolated(FlatAngleError):
    exit_code = 8


class NegativeEntry(FlatAngleError):
    exit_code = 9


class NotMatching(FlatAngleError):
    exit_code = 9


class NotAdmissible(FlatAngleError):
    exit_code = 9


class DiscsNotAdjacent(FlatAngleError):
    exit_code = 9


class ResourceLimit(FlatAngleError):
    exit_code = 10


class LedgerError(FlatAngleError):
    exit_code = 11


class InterfaceMismatch(LedgerError):
    pass


class OddBlockCount(LedgerError):
    pass


class SphereComponent(LedgerError):
    pass


class InvalidBlock(LedgerError):
    pass


class IllFormedLedger(LedgerError):
    pass


class BadIndex(LedgerError):
    pass


class GenusTooSmall(FlatAngleError):
    exit_code = 12
