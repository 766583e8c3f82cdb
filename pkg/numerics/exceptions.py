class CbfpError(Exception):
    """Base class of every error raised by the block floating-point toolkit."""


class UnsupportedValue(CbfpError, ValueError):
    """NaN, infinity, denormal or out-of-range value for the requested format."""


class FormatMismatch(CbfpError, ValueError):
    pass


class BlockSizeMismatch(CbfpError, ValueError):
    pass


class ExponentOverflow(CbfpError, ArithmeticError):
    pass


class ZeroReference(CbfpError, ValueError):
    pass


class LengthMismatch(CbfpError, ValueError):
    pass


class AllZero(CbfpError, ValueError):
    pass


class RatioOutOfRange(CbfpError, ValueError):
    pass


class BitCountNotMultipleOfJ(CbfpError, ValueError):
    pass


class OffsetOutOfRange(CbfpError, IndexError):
    pass


class InvalidRolloff(CbfpError, ValueError):
    pass


class InvalidFilterOrder(CbfpError, ValueError):
    pass


class BlockFileError(CbfpError, ValueError):
    """Malformed binary block file."""


class ConfigFileError(CbfpError, ValueError):
    """Invalid transceiver configuration file, the message names the line."""
