"""Exception types raised by the library.

Every error carries enough structure for the CLI to print a single
machine-parsable line; the class name doubles as the error code.
"""


class SpecbandError(Exception):
    """Base class for all library-specific errors."""

    def code(self):
        """Short machine-readable error code (the class name)."""
        return type(self).__name__


class NonFiniteValue(SpecbandError):
    """A data cell is NaN or infinite.

    Parameters
    ----------
    file : str
        Path of the offending file (empty for in-memory arrays).
    row, col : int
        1-based position of the first non-finite cell; ``row`` counts
        physical file lines, so a skipped header line shifts it by one.
    """

    def __init__(self, file, row, col):
        self.file = str(file)
        self.row = int(row)
        self.col = int(col)
        super().__init__(f"non-finite value at {self.file}:{self.row}:{self.col}")


class EmptyBand(SpecbandError):
    """No Fourier frequency falls inside the requested band."""


class ZeroTotalEnergy(SpecbandError):
    """The spectral estimate is identically zero, so no ratio is defined."""


class BandwidthTooSmall(SpecbandError):
    """Fewer than 3 periodogram ordinates receive nonzero smoothing weight."""


class DimensionMismatch(SpecbandError):
    """Two epochs must share the same component dimension for this operation."""


class LengthMismatch(SpecbandError):
    """Two epochs must share the same length T for this operation."""


class DegenerateVariance(SpecbandError):
    """The plug-in variance estimate is not positive; z is undefined."""

    def __init__(self, sigma2):
        self.sigma2 = float(sigma2)
        super().__init__(f"plug-in variance {self.sigma2:.6g} is not positive")


class SeriesTooShort(SpecbandError):
    """The series is too short for automatic block-length selection."""


class SingularCovariance(SpecbandError):
    """The lag-0 covariance matrix is numerically singular.

    Parameters
    ----------
    eigenvalue : float
        The offending (smallest) eigenvalue.
    """

    def __init__(self, eigenvalue):
        self.eigenvalue = float(eigenvalue)
        super().__init__(
            f"lag-0 covariance is numerically singular "
            f"(eigenvalue {self.eigenvalue:.6g})"
        )


class ZeroDiagonalSpectrum(SpecbandError):
    """A diagonal spectral density is zero on the band; coherence undefined."""


class NonstationaryCoefficients(SpecbandError):
    """Autoregressive coefficients have a characteristic root on or inside
    the unit circle."""
