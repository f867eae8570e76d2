"""Exception hierarchy.

Every error raised by the library derives from :class:`ChowdegError`, which is
itself a ``ValueError`` so callers that only care about bad input can catch the
builtin.
"""


class ChowdegError(ValueError):
    pass


class ParseError(ChowdegError):
    """Monomial text does not match the grammar."""


class LabelError(ChowdegError):
    """Label set is too small or malformed."""


class InvalidCut(ChowdegError):
    """A bipartition that is not a cut of the label set."""


class MismatchedLabelSets(ChowdegError):
    pass


class NotATreeMonomial(ChowdegError):
    pass


class EmptyMonomialBadN(ChowdegError):
    """The empty monomial only has a tree when n = 3."""


class NoCorrespondingMonomial(ChowdegError):
    pass


class InvalidTree(ChowdegError):
    """Structure violates the loaded-tree conditions."""


class NotProper(ChowdegError):
    pass


class DuplicateLabels(ChowdegError):
    pass


class ExponentTooLow(ChowdegError):
    pass


class ImproperQuadruple(ChowdegError):
    pass


class InvalidChoice(ChowdegError):
    pass


class NotSingleEdge(ChowdegError):
    pass


class NotMultiEdge(ChowdegError):
    pass


class TooSmall(ChowdegError):
    pass


class CapExceeded(ChowdegError):
    pass


class VariantPreconditionViolated(ChowdegError):
    pass
