"""Exceptions raised across the SC-FDMA model."""
from typing import Optional


class ScfdmaError(Exception):
    """Base class for other exceptions."""

    pass


class GeometryError(ScfdmaError, ValueError):
    """Raised when the rate integers M, N, N_g are inconsistent."""

    pass


class BlockLengthError(ScfdmaError, ValueError):
    """Raised when a block length does not match the transform or rate factor."""

    pass


class WindowError(ScfdmaError, ValueError):
    """Raised when a spectral window cannot be built for a geometry."""

    pass


class FrameError(ScfdmaError, ValueError):
    """Raised on cyclic prefix misuse (double insertion, missing prefix)."""

    pass


class ChannelError(ScfdmaError, ValueError):
    """Raised when a tap profile does not fit the geometry."""

    pass


class SingularSubchannelError(ScfdmaError, ArithmeticError):
    """Raised when every alias of a subchannel r is nulled by the channel."""

    def __init__(self, subchannel: int, message: Optional[str] = None):
        """Keep the offending subchannel index."""
        self.subchannel = subchannel
        super().__init__(
            message
            or f"ZF equalizer is singular on subchannel r={subchannel}: "
            "channel null across all aliases"
        )


class DegenerateSystemError(ScfdmaError, ArithmeticError):
    """Raised when the overall system carries no power at all."""

    pass


class EstimationError(ScfdmaError, ValueError):
    """Raised when an estimator is given too little data."""

    pass


class ConfigError(ScfdmaError, ValueError):
    """Raised when an experiment configuration violates a constraint."""

    pass
