"""Exception hierarchy.

Every failure raised by the library derives from :class:`AdeHodgeError`.
Outcomes that are undecided at the requested precision (rather than wrong
input) derive from :class:`Undecided`; the CLI maps those to exit code 3.
"""


class AdeHodgeError(Exception):
    """Base class for all library errors."""


class InputError(AdeHodgeError, ValueError):
    """Malformed or inconsistent user input."""


class Undecided(AdeHodgeError):
    """A numeric decision could not be made at the available precision."""


# numbers
class NonIsolating(InputError):
    pass


class MultipleRoot(InputError):
    pass


class DivisionByProvableZero(AdeHodgeError, ZeroDivisionError):
    pass


class PrecisionExhausted(Undecided):
    pass


# poly
class PolySyntaxError(InputError, SyntaxError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.msg = f"{message} at position {position}"
        self.position = position


class UnknownVariable(InputError):
    pass


class NonHomogeneous(InputError):
    pass


class DegenerateDirection(InputError):
    pass


# singular
class NotSingular(InputError):
    pass


class NotDoublePoint(InputError):
    pass


class TruncationInsufficient(Undecided):
    pass


class CorankTooHigh(InputError):
    pass


class NotSimple(InputError):
    """Corank-2 germ whose jets rule out every A-D-E type."""


class KernelDimensionUnexpected(AdeHodgeError):
    pass


class InvalidIndex(InputError):
    pass


class UnsupportedLift(InputError):
    pass


class TypeMismatch(InputError):
    pass


class DuplicatePoint(InputError):
    pass


# defect
class DimensionMismatch(InputError):
    pass


class MissingFrame(InputError):
    pass


class UnsupportedSpecialization(InputError):
    pass


class RankUndecided(Undecided):
    pass


class DivisibilityError(InputError):
    pass


# hodge
class AssumptionViolated(InputError):
    pass


class UnsupportedCover(InputError):
    pass


class UnsupportedFiberTopology(InputError):
    pass


# gallery
class DegreeMismatch(InputError):
    pass


class NonzeroRemainder(InputError):
    pass


class DependentForms(InputError):
    pass


class LineInQuadric(InputError):
    pass


class DegenerateLine(InputError):
    pass


class StageError(AdeHodgeError):
    """Wraps a failure inside a multi-stage pipeline with the stage name."""

    def __init__(self, stage, cause):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
