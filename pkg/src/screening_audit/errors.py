"""Exception hierarchy shared by every module of the toolkit."""


class ScreeningAuditError(Exception):
    """Base class for all toolkit errors."""


class InvalidProbability(ScreeningAuditError, ValueError):
    """A probability-valued input fell outside [0, 1]."""


class UndefinedPosterior(ScreeningAuditError, ZeroDivisionError):
    """The conditioning event of a posterior has probability zero."""


class Unreachable(ScreeningAuditError, ValueError):
    """No prior attains the requested predictive value."""


class InvalidSpec(ScreeningAuditError, ValueError):
    """A dataset or simulation specification violates its invariants."""


class DegenerateTraining(ScreeningAuditError, ValueError):
    """Training data lacks one of the two labels."""


class EmptyAnswer(ScreeningAuditError, ValueError):
    """An answer was scored with no segments."""


class AllUndecided(ScreeningAuditError, ValueError):
    """Every question score of a participant was filtered out."""


class InsufficientParticipants(ScreeningAuditError, ValueError):
    """Too few participants per role for the requested protocol."""


class InsufficientGroups(ScreeningAuditError, ValueError):
    """Too few groups (or group members) to estimate an ICC."""
