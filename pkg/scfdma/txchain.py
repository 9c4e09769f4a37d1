"""Transmitter and receiver along the frequency path and the time path.

Both paths are kept: the frequency path follows the usual DFT-precoded
OFDMA block diagram, the time path is the equivalent circular convolution
at the common rate L on which the SINR analysis is defined. All chain
functions accept stacked frames (frames along the leading axes).
"""
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from scfdma.channel import ChannelRealization, linear_filter
from scfdma.dft import (
    ComplexBlock,
    as_block,
    circular_convolve,
    downsample,
    forward_dft,
    inverse_dft,
    repeat,
    stack,
    upsample,
)
from scfdma.equalize import EqualizerResponse, OverallResponse
from scfdma.geometry import SystemGeometry
from scfdma.shaping import SpectralWindow
from scfdma.utils.errors import (
    BlockLengthError,
    ConfigError,
    FrameError,
    WindowError,
)


@dataclass(frozen=True, eq=False)
class SymbolBlock:
    """Zero-mean i.i.d. data symbols, one block of M per row."""

    x: ComplexBlock
    sigma_x2: float = 1.0

    def __post_init__(self) -> None:
        """Check the variance."""
        if self.sigma_x2 <= 0:
            raise ConfigError(f"symbol variance must be positive, got {self.sigma_x2}")
        object.__setattr__(self, "x", as_block(self.x))


@dataclass(frozen=True, eq=False)
class TimeFrame:
    """Time samples of one or more frames, with or without cyclic prefix."""

    samples: ComplexBlock
    has_cp: bool = False

    def __post_init__(self) -> None:
        """Cast the samples."""
        object.__setattr__(self, "samples", as_block(self.samples))


@dataclass(frozen=True, eq=False)
class SimplifiedOutput:
    """Receiver output split into useful, interference and noise parts."""

    estimate: ComplexBlock
    useful: ComplexBlock
    interference: ComplexBlock
    noise: ComplexBlock


def _shape(M: int, count: Optional[int]) -> Tuple[int, ...]:
    return (M,) if count is None else (count, M)


def qpsk_symbols(
    rng: np.random.Generator, M: int, sigma_x2: float = 1.0, count: Optional[int] = None
) -> SymbolBlock:
    """Unit-modulus QPSK scaled to variance sigma_x2.

    Args:
        rng: Random stream.
        M: Symbols per block.
        sigma_x2: Symbol variance.
        count: Number of blocks; a single block when None.

    Returns:
        SymbolBlock: The symbols.
    """
    shape = _shape(M, count)
    bits = rng.integers(0, 2, size=shape + (2,))
    x = ((1 - 2 * bits[..., 0]) + 1j * (1 - 2 * bits[..., 1])) * np.sqrt(sigma_x2 / 2.0)
    return SymbolBlock(x=x, sigma_x2=sigma_x2)


def gaussian_symbols(
    rng: np.random.Generator, M: int, sigma_x2: float = 1.0, count: Optional[int] = None
) -> SymbolBlock:
    """Circular complex Gaussian symbols of variance sigma_x2."""
    shape = _shape(M, count)
    x = np.sqrt(sigma_x2 / 2.0) * (
        rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    )
    return SymbolBlock(x=x, sigma_x2=sigma_x2)


SYMBOL_SOURCES: Dict[str, Callable[..., SymbolBlock]] = {
    "qpsk": qpsk_symbols,
    "gaussian": gaussian_symbols,
}


def _check_tx(xb: SymbolBlock, w: SpectralWindow, g: SystemGeometry) -> ComplexBlock:
    if w.length != g.L:
        raise WindowError(f"window has {w.length} bins, geometry needs {g.L}")
    return as_block(xb.x, g.M)


def _check_rx(
    r: Union[TimeFrame, npt.ArrayLike], G: EqualizerResponse, g: SystemGeometry
) -> ComplexBlock:
    if isinstance(r, TimeFrame):
        if r.has_cp:
            raise FrameError("remove the cyclic prefix before the receiver")
        r = r.samples
    if G.length != g.L:
        raise BlockLengthError(f"equalizer has {G.length} bins, geometry needs {g.L}")
    return as_block(r, g.N)


def tx_reference(xb: SymbolBlock, w: SpectralWindow, g: SystemGeometry) -> TimeFrame:
    """Frequency path: y = L_N IDFT_N(stack(repeat(DFT_M(x), L_M) * H, N))."""
    x = _check_tx(xb, w, g)
    D = repeat(forward_dft(x), g.L_M) * w.H
    return TimeFrame(samples=g.L_N * inverse_dft(stack(D, g.N)))


def tx_time_equivalent(
    xb: SymbolBlock, w: SpectralWindow, g: SystemGeometry
) -> TimeFrame:
    """Time path: up-sample by L_M, convolve with h, keep every L_N-th sample."""
    x = _check_tx(xb, w, g)
    y_common = circular_convolve(upsample(x, g.L_M), w.h)
    return TimeFrame(samples=g.L_N * downsample(y_common, g.L_N))


def tx_copying(xb: SymbolBlock, w: SpectralWindow, g: SystemGeometry) -> TimeFrame:
    """Shaped transmitter built the classical way.

    M-point DFT, cyclic copy of the M outputs onto the U occupied bins,
    window, then N-point inverse DFT.
    """
    x = _check_tx(xb, w, g)
    k = w.support
    if k.size and k.max() >= g.N:
        raise WindowError("window support must lie inside the N-point band")
    X = forward_dft(x)
    Y = np.zeros(x.shape[:-1] + (g.N,), dtype=np.complex128)
    Y[..., k] = X[..., k % g.M] * w.H[k]
    return TimeFrame(samples=inverse_dft(Y))


def tx_direct_rectangular(
    xb: SymbolBlock, g: SystemGeometry, user_block_index: int = 0
) -> TimeFrame:
    """Plain LFDMA: M-point DFT, map onto M contiguous bins, N-point inverse DFT."""
    x = as_block(xb.x, g.M)
    start = user_block_index * g.M
    if start < 0 or start + g.M > g.N:
        raise WindowError(f"user block {user_block_index} does not fit in {g.N} bins")
    Y = np.zeros(x.shape[:-1] + (g.N,), dtype=np.complex128)
    Y[..., start:start + g.M] = forward_dft(x)
    return TimeFrame(samples=inverse_dft(Y))


def rx_reference(
    r: Union[TimeFrame, npt.ArrayLike], G: EqualizerResponse, g: SystemGeometry
) -> ComplexBlock:
    """Frequency path: x_hat = L_M IDFT_M(stack(repeat(DFT_N(r), L_N) * G, M))."""
    r = _check_rx(r, G, g)
    E = repeat(forward_dft(r), g.L_N) * G.G
    return g.L_M * inverse_dft(stack(E, g.M))


def rx_time_equivalent(
    r: Union[TimeFrame, npt.ArrayLike], G: EqualizerResponse, g: SystemGeometry
) -> ComplexBlock:
    """Time path: up-sample by L_N, convolve with g, keep every L_M-th sample."""
    r = _check_rx(r, G, g)
    x_common = circular_convolve(upsample(r, g.L_N), G.g_time)
    return g.L_M * downsample(x_common, g.L_M)


def rx_combining(
    r: Union[TimeFrame, npt.ArrayLike], G: EqualizerResponse, g: SystemGeometry
) -> ComplexBlock:
    """Classical receiver: demap, equalize, add the aliases of each bin, inverse DFT."""
    r = _check_rx(r, G, g)
    k = np.flatnonzero(G.G)
    if k.size and k.max() >= g.N:
        raise BlockLengthError("equalizer support must lie inside the N-point band")
    Z = forward_dft(r)[..., k] * G.G[k]
    X = np.zeros(r.shape[:-1] + (g.M,), dtype=np.complex128)
    for alias in range(g.M):
        X[..., alias] = Z[..., k % g.M == alias].sum(axis=-1)
    return inverse_dft(X)


def add_cp(frame: TimeFrame, g: SystemGeometry) -> TimeFrame:
    """Prepend the last N_g samples of each frame."""
    if frame.has_cp:
        raise FrameError("frame already carries a cyclic prefix")
    body = as_block(frame.samples, g.N)
    samples = np.concatenate([body[..., g.N - g.N_g:], body], axis=-1)
    return TimeFrame(samples=samples, has_cp=True)


def remove_cp(frame: TimeFrame, g: SystemGeometry) -> TimeFrame:
    """Drop the first N_g samples of each frame."""
    if not frame.has_cp:
        raise FrameError("frame carries no cyclic prefix")
    samples = as_block(frame.samples, g.N_t)
    return TimeFrame(samples=samples[..., g.N_g:].copy(), has_cp=False)


def transmit_stream(
    frames: TimeFrame,
    channels: Union[ChannelRealization, Sequence[ChannelRealization]],
) -> ComplexBlock:
    """Serialize CP-framed frames through a tapped delay line.

    Each frame is linearly convolved with its own channel (block fading); the
    tail spills into the next frame's prefix. The stream is cut at the end of
    the last frame.

    Args:
        frames: Frames with cyclic prefix, shape (F, N_t).
        channels: One realization for all frames, or one per frame.

    Returns:
        The received stream of F * N_t samples.
    """
    if not frames.has_cp:
        raise FrameError("streams are built from frames with a cyclic prefix")
    blocks = np.atleast_2d(frames.samples)
    F, N_t = blocks.shape
    if isinstance(channels, ChannelRealization):
        channels = [channels] * F
    if len(channels) != F:
        raise FrameError(f"{len(channels)} channel realizations for {F} frames")
    memory = max(int(ch.delays.max()) for ch in channels)
    stream = np.zeros(F * N_t + memory, dtype=np.complex128)
    for f, (block, ch) in enumerate(zip(blocks, channels)):
        padded = np.concatenate([block, np.zeros(memory, dtype=np.complex128)])
        stream[f * N_t:(f + 1) * N_t + memory] += linear_filter(padded, ch)
    return stream[:F * N_t]


def split_stream(stream: npt.ArrayLike, g: SystemGeometry) -> TimeFrame:
    """Cut a received stream back into CP-framed frames."""
    stream = as_block(stream)
    if stream.ndim != 1 or stream.shape[0] % g.N_t:
        raise FrameError(
            f"stream length {stream.shape[-1]} is not a multiple of {g.N_t}"
        )
    return TimeFrame(samples=stream.reshape(-1, g.N_t), has_cp=True)


def end_to_end_simplified(
    xb: SymbolBlock, P: OverallResponse, noise: npt.ArrayLike, g: SystemGeometry
) -> SimplifiedOutput:
    """x_hat(n) = L_M sum_m p((n - m) L_M mod L) x(m) + noise(n), split in three.

    The useful part is L_M p(0) x(n); the interference is everything else the
    symbols contribute.
    """
    x = as_block(xb.x, g.M)
    noise = as_block(noise, g.M)
    p_dec = P.decimated
    useful = g.L_M * p_dec[0] * x
    isi_taps = p_dec.copy()
    isi_taps[0] = 0.0
    interference = g.L_M * circular_convolve(x, isi_taps)
    estimate = useful + interference + noise
    return SimplifiedOutput(
        estimate=estimate, useful=useful, interference=interference, noise=noise
    )
