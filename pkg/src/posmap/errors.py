"""Exception hierarchy.

Every error raised by the library derives from :class:`PosmapError`, which is
itself a :class:`ValueError`; the CLI maps these to exit code 1.
"""


class PosmapError(ValueError):
    """Base class for invalid-input errors."""


class NonFinite(PosmapError):
    pass


class NotHermitian(PosmapError):
    pass


class NotSkewHermitian(PosmapError):
    pass


class NotUnitary(PosmapError):
    pass


class DimensionMismatch(PosmapError):
    pass


class WrongDimension(DimensionMismatch):
    pass


class NotNormalized(PosmapError):
    pass


class RankTooLarge(PosmapError):
    pass


class ZeroMatrix(PosmapError):
    pass


class UnknownBuiltin(PosmapError):
    pass


class BadParamCount(PosmapError):
    pass


class NotViolating(PosmapError):
    pass


class NotAState(PosmapError):
    pass
