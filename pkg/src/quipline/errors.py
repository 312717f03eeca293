"""Error hierarchy shared by the engine and the HTTP layer.

Every error carries a stable machine-readable ``code`` so the service can
map it to exactly one HTTP status (the parity test in the suite checks the
mapping is exhaustive).
"""


class GameError(Exception):
    code = "GAME_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)


class UnknownPlayer(GameError):
    code = "UNKNOWN_PLAYER"


class UnknownHeadline(GameError):
    code = "UNKNOWN_HEADLINE"


class SuspendedPlayer(GameError):
    code = "SUSPENDED_PLAYER"


class CapReached(GameError):
    code = "CAP_REACHED"


class PairCapReached(GameError):
    code = "PAIR_CAP_REACHED"


class NotReplaceableIndex(GameError):
    code = "NOT_REPLACEABLE_INDEX"


class SubstituteEqualsOriginal(GameError):
    code = "SUBSTITUTE_EQUALS_ORIGINAL"


class NotSingleWord(GameError):
    code = "NOT_SINGLE_WORD"


class BlacklistedWord(GameError):
    code = "BLACKLISTED_WORD"


class HeadlineNotAvailable(GameError):
    code = "HEADLINE_NOT_AVAILABLE"


class HeadlineNotInPool(GameError):
    code = "HEADLINE_NOT_IN_POOL"


class SelfRating(GameError):
    code = "SELF_RATING"


class DuplicateRating(GameError):
    code = "DUPLICATE_RATING"


class GradeOutOfRange(GameError):
    code = "GRADE_OUT_OF_RANGE"


class TooFast(GameError):
    code = "TOO_FAST"


class SelfFlag(GameError):
    code = "SELF_FLAG"


class AlreadyRemoved(GameError):
    code = "ALREADY_REMOVED"


class EmptyOthers(GameError):
    code = "EMPTY_OTHERS"


class NotFullyRated(GameError):
    code = "NOT_FULLY_RATED"


class CorruptLog(GameError):
    code = "CORRUPT_LOG"

    def __init__(self, message: str = "", seq: int | None = None):
        super().__init__(message)
        self.seq = seq


class InvalidCategory(GameError):
    code = "INVALID_CATEGORY"


class EmptyText(GameError):
    code = "EMPTY_TEXT"


class InsufficientData(GameError):
    code = "INSUFFICIENT_DATA"


class EmptyDataset(GameError):
    code = "EMPTY_DATASET"


class NotSingleSubstitution(GameError):
    code = "NOT_SINGLE_SUBSTITUTION"


class UnknownKnob(GameError):
    code = "UNKNOWN_KNOB"


class InvalidSession(GameError):
    code = "INVALID_SESSION"
