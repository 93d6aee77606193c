"""Exception types raised across the package."""


class MZError(ValueError):
    """Base class for all argument/precondition failures in mzdist."""


class InvalidSpin(MZError):
    pass


class InvalidM(MZError):
    pass


class DimensionMismatch(MZError):
    pass


class NonHermitian(MZError):
    pass


class UnsupportedFamily(MZError):
    pass


class ZeroInformation(MZError):
    pass


class InvalidInterval(MZError):
    pass


class DegenerateLikelihood(MZError):
    pass


class UnsupportedDimension(MZError):
    pass
