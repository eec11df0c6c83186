"""Exception types shared across the package."""


class EtlmscError(Exception):
    """Base class for all errors raised by this package."""


class ShapeMismatch(EtlmscError):
    """Operands have incompatible dimensions."""


class IfftNotReal(EtlmscError):
    """Inverse mode-3 FFT produced a significant imaginary residual."""


class SvdDidNotConverge(EtlmscError):
    """A slice SVD failed to converge numerically."""


class DegenerateData(EtlmscError):
    """Input data admits no meaningful similarity (all pairwise distances zero)."""


class ZeroDegree(EtlmscError):
    """A similarity row sums to zero, so no transition row can be formed."""


class NoConvergence(EtlmscError):
    """Power iteration for the stationary distribution hit its iteration cap."""


class EigenFailure(EtlmscError):
    """Dense symmetric eigendecomposition failed."""


class LengthMismatch(EtlmscError):
    """Two label vectors have different lengths."""


class ViewSizeMismatch(EtlmscError):
    """Views disagree on the number of samples."""


class RankTooLarge(EtlmscError):
    """Requested tubal rank exceeds min(n1, n2)."""


class NotConverged(EtlmscError):
    """ADMM hit max_iters before meeting all three stopping criteria.

    Carries the partial solve in ``result`` so callers can still inspect or
    emit outputs.
    """

    def __init__(self, result, message="ADMM did not converge within max_iters"):
        super().__init__(message)
        self.result = result
