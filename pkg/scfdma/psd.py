"""Analytical and Welch-estimated power spectral densities.

Frequencies are normalized to the transmitted sample rate (cycles per
sample) and live on [-0.5, 0.5).
"""
import enum
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import numpy.typing as npt
import scipy.integrate
import scipy.signal
from tqdm import tqdm  # type: ignore

from scfdma.geometry import SystemGeometry
from scfdma.shaping import SpectralWindow
from scfdma.txchain import SYMBOL_SOURCES, add_cp, tx_time_equivalent
from scfdma.utils.errors import EstimationError

FloatArray = npt.NDArray[np.float64]

# Points where sin(w/2) is closer to zero than this use the limit value.
_INTEGER_TOLERANCE = 1e-12


class PulseKind(enum.Enum):
    """Digital pulse families."""

    RECTANGULAR_NT = "rect-nt"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PulseShape:
    """Length-N_t digital pulse, described by its DTFT."""

    kind: PulseKind
    N_t: int
    response: Callable[[FloatArray], npt.NDArray[np.complex128]]

    def esd(self, nu: npt.ArrayLike) -> FloatArray:
        """Energy spectral density |Psi(nu)|^2."""
        return np.abs(self.response(np.asarray(nu, dtype=np.float64))) ** 2

    @classmethod
    def rectangular(cls, g: SystemGeometry) -> "PulseShape":
        """Rectangular pulse over the N_t samples of a frame.

        The time origin sits at the end of the cyclic prefix, so the pulse
        covers q in [-N_g, N - 1].
        """
        N_t = g.N_t
        delay = (g.N - g.N_g - 1) / 2.0

        def response(nu: FloatArray) -> npt.NDArray[np.complex128]:
            phase = np.exp(-2j * np.pi * nu * delay)
            return N_t * dirichlet(2.0 * np.pi * nu, N_t) * phase

        return cls(kind=PulseKind.RECTANGULAR_NT, N_t=N_t, response=response)


@dataclass(frozen=True, eq=False)
class PsdCurve:
    """Power density on a strictly increasing frequency grid."""

    freqs: FloatArray
    values: FloatArray
    label: str = "analytical"

    def __post_init__(self) -> None:
        """Check the grid and clip round-off below zero."""
        freqs = np.asarray(self.freqs, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if freqs.shape != values.shape or freqs.ndim != 1:
            raise EstimationError("frequencies and values must be matching 1-D arrays")
        if np.any(np.diff(freqs) <= 0):
            raise EstimationError("frequency grid must be strictly increasing")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "values", np.maximum(values, 0.0))


def dirichlet(w: npt.ArrayLike, N_t: int) -> FloatArray:
    """Periodic sinc sin(N_t w / 2) / (N_t sin(w / 2)).

    At multiples w = 2 pi j the limit (-1)^(j (N_t - 1)) is returned.

    Args:
        w: Angular frequency in radians.
        N_t: Pulse length.

    Returns:
        Kernel values, 1 at w = 0.
    """
    w = np.asarray(w, dtype=np.float64)
    half = np.sin(w / 2.0)
    at_integer = np.abs(half) < _INTEGER_TOLERANCE
    j = np.rint(w / (2.0 * np.pi)).astype(np.int64)
    limit = np.where((j * (N_t - 1)) % 2 == 0, 1.0, -1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.sin(N_t * w / 2.0) / (N_t * half)
    out = np.where(at_integer, limit, value)
    return out if out.ndim else float(out)


def frequency_grid(count: int) -> FloatArray:
    """``count`` evenly spaced frequencies on [-0.5, 0.5)."""
    if count < 2:
        raise EstimationError(f"need at least two grid points, got {count}")
    return np.arange(count, dtype=np.float64) / count - 0.5


def _alias_sums(
    w: SpectralWindow, g: SystemGeometry, pulse: PulseShape, grid: FloatArray
) -> npt.NDArray[np.complex128]:
    k = w.support
    terms = pulse.response(grid[:, None] - k[None, :] / g.N) * w.H[k]
    classes = np.zeros((k.size, g.M))
    classes[np.arange(k.size), k % g.M] = 1.0
    return terms @ classes


def analytical_psd(
    w: SpectralWindow,
    g: SystemGeometry,
    pulse: PulseShape,
    grid: npt.ArrayLike,
    sigma_x2: float = 1.0,
) -> PsdCurve:
    """S(f) = M sigma_x^2 / (N_t N^2) sum_r |sum_s H[sM+r] Psi(f - (sM+r)/N)|^2.

    Args:
        w: Transmit window.
        g: Geometry.
        pulse: Digital pulse of the frame.
        grid: Normalized frequencies.
        sigma_x2: Symbol variance.

    Returns:
        PsdCurve: The analytical density.
    """
    grid = np.asarray(grid, dtype=np.float64)
    inner = _alias_sums(w, g, pulse, grid)
    scale = g.M * sigma_x2 / (pulse.N_t * g.N ** 2)
    return PsdCurve(freqs=grid, values=scale * np.sum(np.abs(inner) ** 2, axis=1))


def lfdma_psd(
    g: SystemGeometry,
    pulse: PulseShape,
    grid: npt.ArrayLike,
    sigma_x2: float = 1.0,
    user_block_index: int = 0,
) -> PsdCurve:
    """Rectangular window: one shifted pulse spectrum per occupied bin."""
    grid = np.asarray(grid, dtype=np.float64)
    k = user_block_index * g.M + np.arange(g.M)
    esd = pulse.esd(grid[:, None] - k[None, :] / g.N)
    scale = g.M * sigma_x2 / (pulse.N_t * g.N ** 2)
    return PsdCurve(freqs=grid, values=scale * esd.sum(axis=1))


def rrc_gamma(
    w: SpectralWindow, g: SystemGeometry, pulse: PulseShape, grid: npt.ArrayLike
) -> npt.NDArray[np.complex128]:
    """Per-alias sums of a shaped window, written out by bin regime.

    With M_alpha transition bins on each side of block b, alias r gets the
    flat-part bin bM + r, plus (b+1)M + r when r < M_alpha, plus (b-1)M + r
    when r >= M - M_alpha.

    Returns:
        Array of shape (len(grid), M).
    """
    grid = np.asarray(grid, dtype=np.float64)
    M_alpha = (w.occupied - g.M) // 2
    b = w.user_block_index
    r = np.arange(g.M)

    def term(k: npt.NDArray[np.int64]) -> npt.NDArray[np.complex128]:
        return w.H[k] * pulse.response(grid[:, None] - k[None, :] / g.N)

    gamma = term(b * g.M + r)
    if M_alpha:
        upper = r[r < M_alpha]
        gamma[:, upper] += term((b + 1) * g.M + upper)
        lower = r[r >= g.M - M_alpha]
        gamma[:, lower] += term((b - 1) * g.M + lower)
    return gamma


def welch_estimate(
    samples: npt.ArrayLike,
    segment_len: int,
    overlap: float = 0.5,
    window: str = "boxcar",
) -> PsdCurve:
    """Averaged periodogram, two-sided, unit-variance white noise reads 1.

    Args:
        samples: Long complex stream.
        segment_len: Samples per segment.
        overlap: Fraction of a segment shared with the next one.
        window: Any scipy.signal window name.

    Returns:
        PsdCurve: The estimate on [-0.5, 0.5).
    """
    samples = np.asarray(samples, dtype=np.complex128)
    if segment_len < 2:
        raise EstimationError(f"segment length must be at least 2, got {segment_len}")
    if samples.ndim != 1 or samples.size < 2 * segment_len:
        raise EstimationError(
            f"need at least {2 * segment_len} samples, got {samples.size}"
        )
    if not 0.0 <= overlap < 1.0:
        raise EstimationError(f"overlap must lie in [0, 1), got {overlap}")
    freqs, values = scipy.signal.welch(
        samples,
        fs=1.0,
        window=window,
        nperseg=segment_len,
        noverlap=int(round(overlap * segment_len)),
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    return PsdCurve(
        freqs=np.fft.fftshift(freqs), values=np.fft.fftshift(values), label="estimated"
    )


def simulate_stream(
    w: SpectralWindow,
    g: SystemGeometry,
    frames: int,
    rng: np.random.Generator,
    sigma_x2: float = 1.0,
    constellation: str = "qpsk",
    batch: int = 500,
    progress: bool = True,
) -> npt.NDArray[np.complex128]:
    """Transmit ``frames`` independent frames with cyclic prefix, back to back."""
    if frames < 1:
        raise EstimationError(f"need at least one frame, got {frames}")
    source = SYMBOL_SOURCES[constellation]
    chunks = []
    starts = range(0, frames, batch)
    for start in tqdm(starts, desc="Simulating frames", disable=not progress):
        count = min(batch, frames - start)
        xb = source(rng, g.M, sigma_x2, count=count)
        chunks.append(add_cp(tx_time_equivalent(xb, w, g), g).samples.ravel())
    return np.concatenate(chunks)


def integrate_psd(curve: PsdCurve) -> float:
    """Trapezoid integral over one full period."""
    freqs = np.append(curve.freqs, curve.freqs[0] + 1.0)
    values = np.append(curve.values, curve.values[0])
    return float(scipy.integrate.trapezoid(values, freqs))


def to_db(values: npt.ArrayLike, floor: float = 1e-30) -> FloatArray:
    """10 log10 with a floor for zeros."""
    return 10.0 * np.log10(np.maximum(np.asarray(values, dtype=np.float64), floor))


def max_deviation_db(
    analytical: PsdCurve, estimated: PsdCurve, dynamic_range_db: float = 60.0
) -> float:
    """Largest |estimated - analytical| in dB over bins within range of the peak."""
    if not np.allclose(analytical.freqs, estimated.freqs):
        raise EstimationError("curves must share a frequency grid")
    theory = to_db(analytical.values)
    keep = theory >= theory.max() - dynamic_range_db
    return float(np.max(np.abs(to_db(estimated.values)[keep] - theory[keep])))


def sidelobe_level_db(
    curve: PsdCurve,
    w: SpectralWindow,
    g: SystemGeometry,
    guard_bins: Optional[int] = None,
) -> float:
    """Mean out-of-band density relative to the in-band mean, in dB.

    Out of band means farther than ``guard_bins`` subcarriers (default: the
    window's transition width, at least one) beyond the occupied bins.
    """
    first, last = int(w.support.min()), int(w.support.max())
    if guard_bins is None:
        guard_bins = max(1, (w.occupied - g.M) // 2)
    centre = (first + last) / (2.0 * g.N)
    distance = np.abs((curve.freqs - centre + 0.5) % 1.0 - 0.5)
    half_width = (last - first + 1) / (2.0 * g.N)
    in_band = distance <= half_width
    out_band = distance > half_width + guard_bins / g.N
    if not in_band.any() or not out_band.any():
        raise EstimationError("grid too coarse to separate in-band and out-of-band")
    level = np.mean(curve.values[out_band]) / np.mean(curve.values[in_band])
    logging.info(f"Side-lobe level {10 * np.log10(level):.2f} dB ({w.kind.value})")
    return float(10.0 * np.log10(level))
