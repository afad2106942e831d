# app/errors.py


class RbfTuneError(Exception):
    """Base class for every error raised by the app package."""


class InvalidNodeSet(RbfTuneError, ValueError):
    pass


class DimensionMismatch(RbfTuneError, ValueError):
    pass


class LengthMismatch(RbfTuneError, ValueError):
    pass


class EmptyTestSet(RbfTuneError, ValueError):
    pass


class SingularSystem(RbfTuneError):
    """Both the Cholesky and the pivoted LU factorization failed."""


class DuplicateLandmark(RbfTuneError, ValueError):
    pass


class LandmarkOutOfRange(RbfTuneError, IndexError):
    pass


class TooManyLandmarks(RbfTuneError, ValueError):
    pass


class NonpositiveDiagonal(RbfTuneError):
    """A diagonal entry of the regularized Nystrom inverse is <= 0."""


class DegenerateGeometry(RbfTuneError, ValueError):
    pass


class AllEvaluationsInvalid(RbfTuneError):
    pass


class InvalidStart(RbfTuneError):
    pass


class NoValidRecords(RbfTuneError):
    pass


class ConfigError(RbfTuneError, ValueError):
    pass
