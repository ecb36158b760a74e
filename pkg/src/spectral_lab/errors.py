"""Exception hierarchy shared by every module of the workbench."""


class SpectralLabError(ValueError):
    """Base class for all workbench errors."""


# structured linear algebra
class OddDimensionError(SpectralLabError):
    pass


class NotSkewError(SpectralLabError):
    pass


class DimensionMismatchError(SpectralLabError):
    pass


class DegenerateFormError(SpectralLabError):
    pass


# Pfaffian spectra
class NotSymmetricError(SpectralLabError):
    pass


class DegreeMismatchError(SpectralLabError):
    pass


class ClusteredSpectrumError(SpectralLabError):
    """Two roots of the Pfaffian polynomial are closer than the clustering tolerance."""


# real-form models
class UnpairedEigenvalueError(SpectralLabError):
    pass


class MixedKernelVectorError(SpectralLabError):
    pass


class NoKernelError(SpectralLabError):
    pass


class SingularGammaError(SpectralLabError):
    pass


# plane curves
class BadDegreePatternError(SpectralLabError):
    pass


class NonReducedError(SpectralLabError):
    pass


class WrongGroupError(SpectralLabError):
    pass


# direct-image fiber
class NonRegularPointError(SpectralLabError):
    pass


class DegeneratePairingError(SpectralLabError):
    pass


class BadLiftError(SpectralLabError):
    pass


# numerology
class MOutOfRangeError(SpectralLabError):
    pass


class DegenerateCaseError(SpectralLabError):
    pass


# CLI
class ConfigError(SpectralLabError):
    pass
