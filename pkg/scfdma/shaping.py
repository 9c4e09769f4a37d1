"""Transmit spectral windows H of length L and their time filters h."""
import enum
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import numpy.typing as npt

from scfdma.dft import ComplexBlock, as_block, inverse_dft
from scfdma.geometry import SystemGeometry, nyquist_check
from scfdma.utils.errors import WindowError


class WindowKind(enum.Enum):
    """Families of transmit windows."""

    RECTANGULAR = "rect"
    ROOT_RAISED_COSINE = "rrc"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class SpectralWindow:
    """Frequency response H over the L bins of the common rate, with h = IDFT_L(H).

    ``h`` and ``support`` are derived at construction and cannot be supplied.
    """

    H: ComplexBlock
    kind: WindowKind
    alpha: float = 0.0
    effective_rolloff: float = 0.0
    user_block_index: int = 0
    h: ComplexBlock = field(init=False, repr=False)
    support: npt.NDArray[np.int64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Derive the time filter and the support."""
        H = as_block(self.H).copy()
        if H.ndim != 1:
            raise WindowError("a window is a single block")
        H.setflags(write=False)
        h = inverse_dft(H)
        h.setflags(write=False)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "support", np.flatnonzero(H))

    @property
    def length(self) -> int:
        """Number of bins (L)."""
        return self.H.shape[0]

    @property
    def occupied(self) -> int:
        """Number of non-zero bins (U)."""
        return int(self.support.size)

    @classmethod
    def from_response(
        cls, H: npt.ArrayLike, g: SystemGeometry, kind: WindowKind = WindowKind.CUSTOM
    ) -> "SpectralWindow":
        """Wrap an arbitrary length-L response.

        Args:
            H: Frequency response over L bins.
            g: Geometry the response belongs to.
            kind: Window family label.

        Returns:
            SpectralWindow: The window.
        """
        H = as_block(H)
        if H.shape != (g.L,):
            raise WindowError(f"window must have {g.L} bins, got shape {H.shape}")
        return cls(H=H, kind=kind)


@dataclass(frozen=True)
class ShapingConfig:
    """Which window to build and where the user sits."""

    kind: WindowKind = WindowKind.RECTANGULAR
    alpha: float = 0.0
    user_block_index: Optional[int] = None

    def __post_init__(self) -> None:
        """Check the roll-off range."""
        if not 0.0 <= self.alpha <= 1.0:
            raise WindowError(f"roll-off must lie in [0, 1], got {self.alpha}")

    @property
    def block(self) -> int:
        """User block, defaulting to 0 for rectangular and 1 for shaped windows."""
        if self.user_block_index is not None:
            return self.user_block_index
        return 1 if self.kind is WindowKind.ROOT_RAISED_COSINE else 0


def raised_cosine(f: npt.ArrayLike, beta: float) -> npt.NDArray[np.float64]:
    """Raised-cosine spectrum with unit symbol rate and roll-off beta.

    Args:
        f: Frequencies in units of the symbol rate.
        beta: Roll-off in [0, 1].

    Returns:
        Values in [0, 1]; RC(f) + RC(f - 1) = 1 on the transition band.
    """
    f = np.abs(np.asarray(f, dtype=np.float64))
    inner = (1.0 - beta) / 2.0
    outer = (1.0 + beta) / 2.0
    out = np.where(f <= inner, 1.0, 0.0)
    if beta > 0:
        edge = (f > inner) & (f <= outer)
        out = np.where(
            edge, 0.5 * (1.0 + np.cos(np.pi / beta * (f - inner))), out
        )
    return out


def rectangular_window(g: SystemGeometry, user_block_index: int = 0) -> SpectralWindow:
    """Rectangular window: H_k = 1 on the user's M contiguous bins.

    Args:
        g: Geometry.
        user_block_index: Which block of M bins the user occupies.

    Returns:
        SpectralWindow: The LFDMA window.
    """
    if user_block_index < 0 or (user_block_index + 1) * g.M > g.N:
        raise WindowError(
            f"user block {user_block_index} of {g.M} bins "
            f"does not fit in {g.N} IFFT bins"
        )
    H = np.zeros(g.L, dtype=np.complex128)
    start = user_block_index * g.M
    H[start:start + g.M] = 1.0
    return SpectralWindow(
        H=H, kind=WindowKind.RECTANGULAR, user_block_index=user_block_index
    )


def rrc_window(
    g: SystemGeometry, alpha: float, user_block_index: int = 1
) -> SpectralWindow:
    """Root-raised-cosine window over U = M + 2*M_alpha bins.

    M_alpha = floor(alpha*M/2). The transition band is quantized to the bin
    grid: it spans 2*M_alpha bins centred on each band edge, which is the
    textbook raised cosine of roll-off 2*M_alpha/M sampled at M bins per
    symbol bandwidth. Bins k and k + M then carry complementary power.

    Args:
        g: Geometry.
        alpha: Roll-off factor in [0, 1].
        user_block_index: Block holding the flat part of the window.

    Returns:
        SpectralWindow: The shaped window.
    """
    if not 0.0 <= alpha <= 1.0:
        raise WindowError(f"roll-off must lie in [0, 1], got {alpha}")
    if not nyquist_check(g, alpha):
        raise WindowError(
            "Nyquist condition N >= 2(1+alpha)M violated "
            f"(N={g.N}, M={g.M}, alpha={alpha})"
        )
    M_alpha = int(np.floor(alpha * g.M / 2.0))
    first = user_block_index * g.M - M_alpha
    last = (user_block_index + 1) * g.M + M_alpha - 1
    if first < 0 or last >= g.N:
        raise WindowError(
            f"shaped support [{first}, {last}] does not fit in [0, {g.N - 1}]"
        )

    beta = 2.0 * M_alpha / g.M
    k = np.arange(first, last + 1)
    centre = user_block_index * g.M + (g.M - 1) / 2.0
    H = np.zeros(g.L, dtype=np.complex128)
    H[first:last + 1] = np.sqrt(raised_cosine((k - centre) / g.M, beta))
    if beta != alpha:
        logging.info(
            f"Roll-off {alpha} quantized to {beta:.4f} "
            f"on {g.M} bins (M_alpha={M_alpha})"
        )
    return SpectralWindow(
        H=H,
        kind=WindowKind.ROOT_RAISED_COSINE,
        alpha=alpha,
        effective_rolloff=beta,
        user_block_index=user_block_index,
    )


def build_window(g: SystemGeometry, config: ShapingConfig) -> SpectralWindow:
    """Build the window described by a shaping config."""
    if config.kind is WindowKind.RECTANGULAR:
        return rectangular_window(g, config.block)
    if config.kind is WindowKind.ROOT_RAISED_COSINE:
        return rrc_window(g, config.alpha, config.block)
    raise WindowError(
        f"{config.kind.value} windows are built with SpectralWindow.from_response"
    )
