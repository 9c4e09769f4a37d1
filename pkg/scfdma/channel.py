"""Block-fading tapped-delay channels and additive noise."""
import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
import scipy.signal

from scfdma.dft import ComplexBlock, as_block, forward_dft, inverse_dft
from scfdma.geometry import LteNumerology, SystemGeometry
from scfdma.utils.errors import ChannelError

PEDESTRIAN_A_SAMPLE_NS = 130.2


@dataclass(frozen=True)
class TapProfile:
    """Power delay profile: (delay_ns, avg_power_db) rows."""

    entries: Tuple[Tuple[float, float], ...]
    sample_duration_ns: float = PEDESTRIAN_A_SAMPLE_NS
    name: str = "custom"

    def __post_init__(self) -> None:
        """Check the rows."""
        if not self.entries:
            raise ChannelError("a tap profile needs at least one tap")
        if self.sample_duration_ns <= 0:
            raise ChannelError(
                f"sample duration must be positive, got {self.sample_duration_ns}"
            )
        for delay, _ in self.entries:
            if delay < 0:
                raise ChannelError(f"tap delays must be non-negative, got {delay} ns")

    @property
    def sample_delays(self) -> npt.NDArray[np.int64]:
        """Tap delays rounded to the nearest sample."""
        delays = np.array([d for d, _ in self.entries], dtype=np.float64)
        return np.rint(delays / self.sample_duration_ns).astype(np.int64)

    @property
    def linear_powers(self) -> npt.NDArray[np.float64]:
        """Average tap powers on a linear scale."""
        return 10.0 ** (np.array([p for _, p in self.entries], dtype=np.float64) / 10.0)

    @property
    def max_delay(self) -> int:
        """Largest delay in samples."""
        return int(self.sample_delays.max())


@dataclass(frozen=True)
class NoiseModel:
    """Circular complex Gaussian noise with per-sample variance sigma_w2."""

    sigma_w2: float

    def __post_init__(self) -> None:
        """Check the variance."""
        if self.sigma_w2 < 0:
            raise ChannelError(
                f"noise variance must be non-negative, got {self.sigma_w2}"
            )


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One block-fading draw: taps, N-point response C, and its L-point extension.

    C_ext equals C on [0, N) and is zero on [N, L); c_time = IDFT_L(C_ext).
    """

    delays: npt.NDArray[np.int64]
    gains: ComplexBlock
    geometry: SystemGeometry
    C: ComplexBlock = field(init=False, repr=False)
    C_ext: ComplexBlock = field(init=False, repr=False)
    c_time: ComplexBlock = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Derive the frequency responses."""
        g = self.geometry
        delays = np.asarray(self.delays, dtype=np.int64)
        gains = as_block(self.gains).copy()
        if delays.shape != gains.shape or delays.ndim != 1:
            raise ChannelError("delays and gains must be matching 1-D sequences")
        if delays.min() < 0:
            raise ChannelError("tap delays must be non-negative")
        if delays.max() > g.N_g:
            raise ChannelError(
                f"tap delay {delays.max()} exceeds cyclic prefix {g.N_g}"
            )
        C = forward_dft(self.impulse_response_of(delays, gains, g.N))
        C_ext = np.zeros(g.L, dtype=np.complex128)
        C_ext[:g.N] = C
        c_time = inverse_dft(C_ext)
        for name, value in (
            ("delays", delays),
            ("gains", gains),
            ("C", C),
            ("C_ext", C_ext),
            ("c_time", c_time),
        ):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @staticmethod
    def impulse_response_of(
        delays: npt.NDArray[np.int64], gains: ComplexBlock, length: int
    ) -> ComplexBlock:
        """Zero-padded tap impulse response."""
        c = np.zeros(length, dtype=np.complex128)
        np.add.at(c, delays, gains)
        return c

    @property
    def impulse_response(self) -> ComplexBlock:
        """Taps laid out on max_delay + 1 samples."""
        length = int(self.delays.max()) + 1
        return self.impulse_response_of(self.delays, self.gains, length)

    @classmethod
    def from_taps(
        cls, delays: Sequence[int], gains: Sequence[complex], g: SystemGeometry
    ) -> "ChannelRealization":
        """Build a fixed channel from explicit taps."""
        return cls(
            delays=np.asarray(delays, dtype=np.int64),
            gains=np.asarray(gains, dtype=np.complex128),
            geometry=g,
        )

    @classmethod
    def unit(cls, g: SystemGeometry) -> "ChannelRealization":
        """Deterministic single unit tap (C_k = 1)."""
        return cls.from_taps([0], [1.0], g)


def pedestrian_a_profile() -> TapProfile:
    """Simplified ITU Pedestrian A, quantized to 130.2 ns samples (N = 512, 5 MHz)."""
    return TapProfile(
        entries=((0.0, 0.0), (130.2, -9.24), (390.6, -22.8)),
        sample_duration_ns=PEDESTRIAN_A_SAMPLE_NS,
        name="pedestrian-a",
    )


def flat_profile() -> TapProfile:
    """A single 0 dB tap."""
    return TapProfile(entries=((0.0, 0.0),), name="flat")


def exponential_profile(
    n_taps: int,
    decay_db: float = 3.0,
    sample_duration_ns: float = PEDESTRIAN_A_SAMPLE_NS,
) -> TapProfile:
    """One tap per sample with power falling by ``decay_db`` per tap."""
    if n_taps < 1:
        raise ChannelError(f"need at least one tap, got {n_taps}")
    return TapProfile(
        entries=tuple((i * sample_duration_ns, -decay_db * i) for i in range(n_taps)),
        sample_duration_ns=sample_duration_ns,
        name=f"exponential-{n_taps}",
    )


def load_profile(
    path: str, sample_duration_ns: float = LteNumerology().sample_duration_ns
) -> TapProfile:
    """Read ``delay_ns,power_db`` rows (``#`` comments allowed).

    Args:
        path: A string pointing to the profile file.
        sample_duration_ns: Sample duration used to quantize delays.

    Returns:
        TapProfile: The profile.
    """
    try:
        rows = np.loadtxt(path, delimiter=",", comments="#", ndmin=2, dtype=np.float64)
    except ValueError as e:
        raise ChannelError(f"cannot parse tap profile {path}: {e}") from e
    if rows.shape[0] == 0 or rows.shape[1] != 2:
        raise ChannelError(f"{path} must hold delay_ns,power_db rows")
    logging.info(f"Loaded {rows.shape[0]} taps from {path}")
    return TapProfile(
        entries=tuple((float(d), float(p)) for d, p in rows),
        sample_duration_ns=sample_duration_ns,
        name=path,
    )


def realize(
    profile: TapProfile,
    rng: np.random.Generator,
    g: SystemGeometry,
    normalize: bool = True,
) -> ChannelRealization:
    """Draw one Rayleigh block-fading realization of a profile.

    Args:
        profile: Power delay profile.
        rng: Random stream for this frame.
        g: Geometry (the CP must cover the largest delay).
        normalize: Scale average tap powers to a unit total.

    Returns:
        ChannelRealization: The draw.
    """
    if profile.max_delay > g.N_g:
        raise ChannelError(
            f"tap delay {profile.max_delay} exceeds cyclic prefix {g.N_g}"
        )
    powers = profile.linear_powers
    if normalize:
        powers = powers / powers.sum()
    gains = np.sqrt(powers / 2.0) * (
        rng.standard_normal(powers.size) + 1j * rng.standard_normal(powers.size)
    )
    return ChannelRealization(delays=profile.sample_delays, gains=gains, geometry=g)


def awgn(
    rng: np.random.Generator,
    count: Union[int, Tuple[int, ...]],
    noise: NoiseModel,
) -> ComplexBlock:
    """Circular complex Gaussian samples, real and imaginary parts N(0, sigma_w2/2).

    Args:
        rng: Random stream.
        count: Number of samples, or an output shape.
        noise: Noise model.

    Returns:
        The samples.
    """
    shape = (count,) if np.isscalar(count) else tuple(count)
    if any(s < 1 for s in shape):
        raise ChannelError(f"noise shape must be positive, got {shape}")
    scale = np.sqrt(noise.sigma_w2 / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def circular_filter(frame: npt.ArrayLike, ch: ChannelRealization) -> ComplexBlock:
    """Apply the channel as an N-point circular convolution (CP already removed)."""
    frame = as_block(frame, ch.geometry.N)
    return inverse_dft(forward_dft(frame) * ch.C)


def linear_filter(stream: npt.ArrayLike, ch: ChannelRealization) -> ComplexBlock:
    """Apply the channel taps as a causal linear convolution, truncated to the input."""
    return scipy.signal.lfilter(ch.impulse_response, [1.0], as_block(stream), axis=-1)
