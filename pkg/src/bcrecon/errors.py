"""Exception hierarchy shared across the package."""


class BcreconError(Exception):
    """Base class for all library errors."""


class ContractViolation(BcreconError):
    """An argument violated a documented precondition (shape, finiteness)."""


class SvdConvergenceError(BcreconError):
    """The SVD backend failed to converge.

    ``iterations`` carries the backend's iteration count when it exposes one,
    otherwise -1.
    """

    def __init__(self, message, iterations=-1):
        super().__init__(message)
        self.iterations = iterations


class RepeatedRoots(BcreconError):
    """Characteristic roots coincide; the fundamental system degenerates."""


class LambdaTooSmall(BcreconError):
    """Spectral parameter too close to zero for the fundamental system."""


class RangeOverflow(BcreconError):
    """An exponential factor would overflow double precision."""


class RankDeficient(BcreconError):
    """A boundary matrix fails its rank-3 requirement."""


class ZeroMinorVector(BcreconError):
    """A minor vector is identically zero (no matrix can produce it)."""


class InconsistentMinors(BcreconError):
    """A minor vector does not correspond to any rank-3 boundary matrix.

    Carries ``deviation``, the projective round-trip mismatch in [0, 1].
    """

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class TooFewEigenvalues(BcreconError):
    """Fewer eigenvalues than the 19 the reconstruction system requires."""


class NoEigenvaluesFound(TooFewEigenvalues):
    """A search produced no eigenvalues at all."""


class ProblemFormatError(BcreconError):
    """A problem/spectrum file failed to parse or validate."""
