"""Joint demapper/equalizer responses and the overall system response."""
import enum
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from scfdma.channel import ChannelRealization
from scfdma.dft import ComplexBlock, as_block, inverse_dft, stack
from scfdma.geometry import SystemGeometry
from scfdma.shaping import SpectralWindow
from scfdma.utils.errors import (
    BlockLengthError,
    ConfigError,
    DegenerateSystemError,
    SingularSubchannelError,
)

# Relative threshold below which an alias class counts as nulled.
SINGULAR_TOLERANCE = 1e-12


class EqualizerKind(enum.Enum):
    """Equalizer families."""

    ZF = "zf"
    MMSE = "mmse"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class EqualizerResponse:
    """Length-L receive response G with the demapper folded in."""

    G: ComplexBlock
    kind: EqualizerKind = EqualizerKind.CUSTOM
    g_time: ComplexBlock = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Freeze G and derive g_time."""
        G = as_block(self.G).copy()
        if G.ndim != 1:
            raise BlockLengthError("an equalizer response is a single block")
        G.setflags(write=False)
        g_time = inverse_dft(G)
        g_time.setflags(write=False)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "g_time", g_time)

    @property
    def length(self) -> int:
        """Number of bins (L)."""
        return self.G.shape[0]


@dataclass(frozen=True, eq=False)
class OverallResponse:
    """P = H * C_ext * G and its time-domain views.

    ``decimated`` is p(n L_M) for n in [0, M), which equals the inverse
    M-point DFT of ``stack(P, M)``. ``stacked`` holds the alias sums
    sum_s P[sM + r].
    """

    P: ComplexBlock
    geometry: SystemGeometry
    p_time: ComplexBlock = field(init=False, repr=False)
    decimated: ComplexBlock = field(init=False, repr=False)
    stacked: ComplexBlock = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Derive p, its decimation and the alias sums."""
        g = self.geometry
        P = as_block(self.P, g.L).copy()
        p_time = inverse_dft(P)
        derived = {
            "P": P,
            "p_time": p_time,
            "decimated": inverse_dft(stack(P, g.M)),
            "stacked": P.reshape(g.L_M, g.M).sum(axis=0),
        }
        for name, value in derived.items():
            value.setflags(write=False)
            object.__setattr__(self, name, value)


def _check_lengths(w: SpectralWindow, ch: ChannelRealization) -> SystemGeometry:
    g = ch.geometry
    if w.length != g.L:
        raise BlockLengthError(f"window has {w.length} bins, geometry needs {g.L}")
    return g


def alias_power(w: SpectralWindow, ch: ChannelRealization) -> npt.NDArray[np.float64]:
    """D_r = sum_s |H[sM + r] C_ext[sM + r]|^2 for r in [0, M)."""
    g = _check_lengths(w, ch)
    return (np.abs(w.H * ch.C_ext) ** 2).reshape(g.L_M, g.M).sum(axis=0)


def _on_support(
    w: SpectralWindow, ch: ChannelRealization, denominator: npt.NDArray[np.float64]
) -> ComplexBlock:
    g = ch.geometry
    G = np.zeros(g.L, dtype=np.complex128)
    k = w.support
    G[k] = np.conj(w.H[k] * ch.C_ext[k]) / denominator[k % g.M]
    return G


def zf(
    w: SpectralWindow, ch: ChannelRealization, g: SystemGeometry
) -> EqualizerResponse:
    """Zero-forcing response: every alias class of P sums to one.

    Args:
        w: Transmit window.
        ch: Channel realization.
        g: Geometry.

    Returns:
        EqualizerResponse: The ZF response.

    Raises:
        SingularSubchannelError: When the channel nulls every alias of a bin.
    """
    if ch.geometry != g:
        raise BlockLengthError("channel realization belongs to another geometry")
    D = alias_power(w, ch)
    peak = D.max()
    if peak <= 0:
        raise DegenerateSystemError("window and channel share no power")
    singular = np.flatnonzero(D < SINGULAR_TOLERANCE * peak)
    if singular.size:
        raise SingularSubchannelError(int(singular[0]))
    return EqualizerResponse(G=_on_support(w, ch, D), kind=EqualizerKind.ZF)


def mmse(
    w: SpectralWindow, ch: ChannelRealization, g: SystemGeometry, es_n0: float
) -> EqualizerResponse:
    """MMSE response for a linear Es/N0.

    The regularization is kappa = (1/M)(N0/Es) sum_k |H_k C_ext_k|^2.
    """
    if es_n0 <= 0:
        raise ConfigError(f"Es/N0 must be positive, got {es_n0}")
    if ch.geometry != g:
        raise BlockLengthError("channel realization belongs to another geometry")
    D = alias_power(w, ch)
    total = D.sum()
    if total <= 0:
        raise DegenerateSystemError("window and channel share no power")
    kappa = total / (g.M * es_n0)
    return EqualizerResponse(G=_on_support(w, ch, D + kappa), kind=EqualizerKind.MMSE)


def mmse_from_variances(
    w: SpectralWindow, ch: ChannelRealization, sigma_x2: float, sigma_w2: float
) -> EqualizerResponse:
    """MMSE response written with the per-sample variances.

    With sigma_W^2 = N sigma_w^2 and sigma_X^2 = M sigma_x^2 the regularization
    is sigma_W^2 / sigma_X^2.
    """
    g = ch.geometry
    D = alias_power(w, ch)
    if D.sum() <= 0:
        raise DegenerateSystemError("window and channel share no power")
    kappa = (g.N * sigma_w2) / (g.M * sigma_x2)
    return EqualizerResponse(G=_on_support(w, ch, D + kappa), kind=EqualizerKind.MMSE)


def zf_noise_gain(w: SpectralWindow, ch: ChannelRealization) -> float:
    """sum_k |G_k^ZF|^2 in closed form, sum_r 1 / D_r."""
    D = alias_power(w, ch)
    if np.any(D <= 0):
        raise SingularSubchannelError(int(np.flatnonzero(D <= 0)[0]))
    return float(np.sum(1.0 / D))


def overall_response(
    w: SpectralWindow, ch: ChannelRealization, G: EqualizerResponse
) -> OverallResponse:
    """P_k = H_k C_ext_k G_k."""
    g = _check_lengths(w, ch)
    if G.length != g.L:
        raise BlockLengthError(f"equalizer has {G.length} bins, geometry needs {g.L}")
    return OverallResponse(P=w.H * ch.C_ext * G.G, geometry=g)
