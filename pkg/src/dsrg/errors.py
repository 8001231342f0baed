"""Exception types shared across the package."""


class DsrgError(Exception):
    """Base class for all errors raised by this package."""


class NotCirculant(DsrgError):
    """A matrix block is not a circulant (row r is not the r-fold right
    shift of the first row).  Carries the block position when raised while
    compactifying a block matrix."""

    def __init__(self, msg, block=None):
        super().__init__(msg)
        self.block = block


class BadDimension(DsrgError):
    """Block size does not divide the matrix order."""


class ModulusMismatch(DsrgError):
    """Polynomial operands live in different quotient rings."""


class DimensionMismatch(DsrgError):
    """Matrix operands have incompatible shapes."""


class NegativeParameter(DsrgError):
    """A derived parameter set has a negative entry."""


class TooLarge(DsrgError):
    """Input exceeds a size guard for naive enumeration."""


class IndivisibleParameters(DsrgError):
    """Parameters are incompatible with the requested block size."""


class InfeasibleEntry(DsrgError):
    """A stage-1 matrix entry exceeds the block size and cannot be lifted."""


class CheckpointCorrupt(DsrgError):
    """A checkpoint file contains lines that do not parse."""


class NoZ3Structure(DsrgError):
    """No order-3 automorphism with a single fixed point exists."""


class IllegalFloorInterior(DsrgError):
    """Edges inside a floor are not empty, one 3-cycle, or two opposing
    3-cycles."""


class NotShiftInvariant(DsrgError):
    """An inter-floor edge set is not a union of shift classes."""


class CertificateOracleDisagreement(DsrgError):
    """Certificate equality contradicts the isomorphism oracle."""


class ParseError(DsrgError):
    """A matrix or record file does not parse."""
