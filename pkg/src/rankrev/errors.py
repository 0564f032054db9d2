"""Exception hierarchy.

Everything raised on purpose by this package derives from :class:`RankRevError`.
:class:`InputError` marks problems with user-supplied data (bad matrices,
malformed files); the CLI maps those to exit code 1 and everything else to 2.
"""


class RankRevError(Exception):
    """Base class for all package errors."""


class InputError(RankRevError):
    """Invalid user-supplied data."""


# -- decision matrix ---------------------------------------------------------


class DimensionMismatch(InputError):
    pass


class DuplicateName(InputError):
    pass


class NonFiniteValue(InputError):
    pass


class NonPositiveWeight(InputError):
    pass


class UnknownAlternative(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownCriterion(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# -- rankings ----------------------------------------------------------------


class InvalidRank(RankRevError, ValueError):
    """A rank vector violates the dense-ranking invariants."""


class ExtraKeyConflict(RankRevError):
    """Attempt to overwrite an existing ``extra`` key."""


class ComparatorMismatch(RankRevError):
    """Rankings in a comparator cover different alternatives or reuse a label."""


class TooFewEntries(RankRevError):
    pass


# -- methods -----------------------------------------------------------------


class MinimizeNotInverted(RankRevError):
    pass


class ZeroColumnNorm(RankRevError):
    pass


class DegenerateIdeal(RankRevError):
    pass


class ZeroInMinimizeColumn(RankRevError):
    pass


class AllFiltered(RankRevError):
    """A filter removed every alternative."""


class InvalidPipeline(RankRevError):
    pass


# -- audits ------------------------------------------------------------------


class TargetIsOptimal(RankRevError):
    pass


class PipelineEliminatedAlternatives(RankRevError):
    pass


class NotAnRrt1Comparator(RankRevError):
    pass


class NTooSmall(RankRevError, ValueError):
    pass


class NotATournament(RankRevError):
    pass


class AlreadyAcyclic(RankRevError):
    pass


class CycleDetected(RankRevError):
    pass


# -- file ingestion ----------------------------------------------------------


class ParseError(InputError):
    """Malformed matrix or config file.

    ``line`` and ``column`` are 1-based and may be ``None`` when the problem
    is not tied to a location.
    """

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class MissingObjective(InputError):
    pass


class MissingWeight(InputError):
    pass


class UnknownStage(InputError):
    pass
