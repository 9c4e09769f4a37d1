"""Transform conventions and multirate primitives.

The forward DFT carries no scale factor and the inverse carries 1/A:

    X_k = sum_p x_p exp(-j 2 pi p k / A)
    x_n = (1/A) sum_p X_p exp(+j 2 pi p n / A)

Every constant in the PSD and SINR modules assumes this pairing. All
functions work on the last axis, so stacked frames of shape (..., A)
are processed in one call.
"""
import contextlib
from typing import Iterator, Optional

import numpy as np
import numpy.typing as npt
import scipy.fft

from scfdma.utils.errors import BlockLengthError

ComplexBlock = npt.NDArray[np.complex128]

# scipy.fft "backward" is the unscaled-forward / 1/A-inverse pairing.
_NORM = "backward"


@contextlib.contextmanager
def override_normalization(norm: str) -> Iterator[None]:
    """Temporarily switch the transform scaling, for fault-injection checks.

    Args:
        norm: Any scipy.fft norm ("backward", "ortho", "forward").
    """
    global _NORM
    previous = _NORM
    _NORM = norm
    try:
        yield
    finally:
        _NORM = previous


def as_block(values: npt.ArrayLike, length: Optional[int] = None) -> ComplexBlock:
    """Cast to a complex array and optionally check the block length.

    Args:
        values: Block or stack of blocks (block along the last axis).
        length: Expected block length, if any.

    Returns:
        The values as complex128.
    """
    block = np.asarray(values, dtype=np.complex128)
    if block.ndim == 0 or block.shape[-1] < 1:
        raise BlockLengthError("a block needs at least one sample")
    if length is not None and block.shape[-1] != length:
        raise BlockLengthError(
            f"expected blocks of length {length}, got {block.shape[-1]}"
        )
    return block


def forward_dft(x: npt.ArrayLike) -> ComplexBlock:
    """Unnormalized forward DFT of any length."""
    return scipy.fft.fft(as_block(x), axis=-1, norm=_NORM)


def inverse_dft(X: npt.ArrayLike) -> ComplexBlock:
    """Inverse DFT with the 1/A factor."""
    return scipy.fft.ifft(as_block(X), axis=-1, norm=_NORM)


def stack(D: npt.ArrayLike, N: int) -> ComplexBlock:
    """Fold a length-L block onto N bins: out(r) = (1/L_N) sum_s D(sN + r).

    Args:
        D: Block of length L.
        N: Output length; must divide L.

    Returns:
        Block of length N.
    """
    D = as_block(D)
    L = D.shape[-1]
    if N < 1 or L % N:
        raise BlockLengthError(f"stacking size {N} does not divide block length {L}")
    L_N = L // N
    return D.reshape(D.shape[:-1] + (L_N, N)).sum(axis=-2) / L_N


def repeat(X: npt.ArrayLike, times: int) -> ComplexBlock:
    """Concatenate a block with itself ``times`` times."""
    if times < 1:
        raise BlockLengthError(f"repetition count must be positive, got {times}")
    X = as_block(X)
    return np.tile(X, (1,) * (X.ndim - 1) + (times,))


def upsample(x: npt.ArrayLike, factor: int) -> ComplexBlock:
    """Insert factor - 1 zeros after every sample."""
    if factor < 1:
        raise BlockLengthError(f"up-sampling factor must be positive, got {factor}")
    x = as_block(x)
    out = np.zeros(x.shape[:-1] + (x.shape[-1] * factor,), dtype=np.complex128)
    out[..., ::factor] = x
    return out


def downsample(x: npt.ArrayLike, factor: int) -> ComplexBlock:
    """Keep every ``factor``-th sample; the factor must divide the length."""
    x = as_block(x)
    if factor < 1 or x.shape[-1] % factor:
        raise BlockLengthError(
            f"down-sampling factor {factor} does not divide block length {x.shape[-1]}"
        )
    return x[..., ::factor].copy()


def circular_convolve(x: npt.ArrayLike, h: npt.ArrayLike) -> ComplexBlock:
    """Circular convolution out(n) = sum_m x(m) h((n - m) mod L).

    Evaluated as a product of transforms. ``h`` may be a single block that
    broadcasts over stacked ``x``.
    """
    x = as_block(x)
    h = as_block(h)
    if x.shape[-1] != h.shape[-1]:
        raise BlockLengthError(
            "circular convolution needs equal lengths, "
            f"got {x.shape[-1]} and {h.shape[-1]}"
        )
    return inverse_dft(forward_dft(x) * forward_dft(h))


def circular_convolve_direct(x: npt.ArrayLike, h: npt.ArrayLike) -> ComplexBlock:
    """O(L^2) modular-sum circular convolution of two single blocks."""
    x = as_block(x)
    h = as_block(h)
    if x.ndim != 1 or h.ndim != 1 or x.shape != h.shape:
        raise BlockLengthError("direct convolution takes two blocks of equal length")
    L = x.shape[0]
    n = np.arange(L)
    return h[(n[:, None] - n[None, :]) % L] @ x
