"""Analytical and Monte Carlo SINR of the equivalent time-domain model."""
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from scfdma.channel import (
    ChannelRealization,
    NoiseModel,
    TapProfile,
    awgn,
    realize,
)
from scfdma.equalize import (
    EqualizerKind,
    EqualizerResponse,
    OverallResponse,
    mmse,
    overall_response,
    zf,
)
from scfdma.geometry import SystemGeometry
from scfdma.shaping import SpectralWindow
from scfdma.txchain import SYMBOL_SOURCES, end_to_end_simplified, rx_time_equivalent
from scfdma.utils.errors import (
    ConfigError,
    DegenerateSystemError,
    EstimationError,
    ScfdmaError,
    SingularSubchannelError,
)
from scfdma.utils.rng_utils import ordered_map, substream

# Redraws allowed per realization before giving up on a ZF-singular profile.
MAX_REDRAWS = 100

# Interference below this fraction of the useful power counts as none.
INTERFERENCE_FREE = 1e-10


@dataclass(frozen=True)
class LinkBudget:
    """Es/N0 (linear), symbol variance, and the matching noise variance."""

    es_n0: float
    sigma_x2: float
    sigma_w2: float

    @classmethod
    def from_es_n0(
        cls,
        es_n0: float,
        w: SpectralWindow,
        ch: ChannelRealization,
        g: SystemGeometry,
        sigma_x2: float = 1.0,
    ) -> "LinkBudget":
        """Derive sigma_w^2 for a window, channel and Es/N0."""
        return cls(
            es_n0=es_n0,
            sigma_x2=sigma_x2,
            sigma_w2=es_n0_to_sigma_w2(es_n0, w, ch, g, sigma_x2),
        )


@dataclass(frozen=True)
class SinrTerms:
    """Useful, interference and noise powers at the equalizer output."""

    useful: float
    interference: float
    noise: float

    @property
    def interference_free(self) -> bool:
        """Whether the interference is negligible against the useful power."""
        return self.interference <= INTERFERENCE_FREE * self.useful

    @property
    def sinr(self) -> float:
        """useful / (interference + noise), inf when the denominator vanishes."""
        denominator = self.interference + self.noise
        if denominator <= 0:
            if self.useful <= 0:
                raise DegenerateSystemError("no signal and no disturbance")
            return float("inf")
        return self.useful / denominator


@dataclass(frozen=True)
class SinrPoint:
    """One Es/N0 grid point, averaged over realizations."""

    es_n0_db: float
    analytical: float
    empirical: float
    ci_halfwidth: float
    useful: float
    interference: float
    noise: float
    analytical_dbmean: float
    empirical_dbmean: float
    interference_free: bool = False

    @property
    def es_n0(self) -> float:
        """Linear Es/N0."""
        return 10.0 ** (self.es_n0_db / 10.0)


@dataclass(frozen=True)
class SinrReport:
    """Per-equalizer SINR curve over an Es/N0 grid."""

    equalizer: EqualizerKind
    points: List[SinrPoint]
    realizations: int
    dropped_realizations: int = 0


@dataclass(frozen=True)
class SinrSetup:
    """Everything a SINR campaign needs besides its size and seed."""

    window: SpectralWindow
    profile: TapProfile
    geometry: SystemGeometry
    es_n0_db: Tuple[float, ...]
    equalizers: Tuple[EqualizerKind, ...] = (EqualizerKind.ZF, EqualizerKind.MMSE)
    sigma_x2: float = 1.0
    normalize: bool = True
    constellation: str = "qpsk"


@dataclass
class _Draw:
    values: npt.NDArray[np.float64]
    attempts: int = 0


def _total_power(w: SpectralWindow, ch: ChannelRealization) -> float:
    return float(np.sum(np.abs(w.H * ch.C_ext) ** 2))


def es_n0_to_sigma_w2(
    es_n0: float,
    w: SpectralWindow,
    ch: ChannelRealization,
    g: SystemGeometry,
    sigma_x2: float = 1.0,
) -> float:
    """sigma_w^2 = sigma_x^2 sum_k |H_k C_ext_k|^2 / (N Es/N0).

    Args:
        es_n0: Linear Es/N0; inf gives a noiseless link.
        w: Transmit window.
        ch: Channel realization.
        g: Geometry.
        sigma_x2: Symbol variance.

    Returns:
        Noise variance per received sample.
    """
    if es_n0 <= 0:
        raise ConfigError(f"Es/N0 must be positive, got {es_n0}")
    total = _total_power(w, ch)
    if total <= 0:
        raise DegenerateSystemError("window and channel share no power")
    return sigma_x2 * total / (g.N * es_n0)


def sigma_w2_to_es_n0(
    sigma_w2: float,
    w: SpectralWindow,
    ch: ChannelRealization,
    g: SystemGeometry,
    sigma_x2: float = 1.0,
) -> float:
    """Inverse of ``es_n0_to_sigma_w2``."""
    if sigma_w2 <= 0:
        return float("inf")
    return sigma_x2 * _total_power(w, ch) / (g.N * sigma_w2)


def received_signal_power(
    w: SpectralWindow, ch: ChannelRealization, sigma_x2: float = 1.0
) -> float:
    """Mean power per received sample, sigma_x^2 (M/N^2) sum_k |H_k C_ext_k|^2."""
    g = ch.geometry
    return sigma_x2 * g.M / g.N ** 2 * _total_power(w, ch)


def useful_power(P: OverallResponse, sigma_x2: float = 1.0) -> float:
    """P_u = (sigma_x^2 / M^2) |sum_k P_k|^2."""
    M = P.geometry.M
    return float(sigma_x2 / M ** 2 * np.abs(P.P.sum()) ** 2)


def interference_power(P: OverallResponse, sigma_x2: float = 1.0) -> float:
    """sigma_i^2 = (sigma_x^2 / M^2)(M sum_r |sum_l P[lM + r]|^2 - |sum_k P_k|^2)."""
    M = P.geometry.M
    received = M * np.sum(np.abs(P.stacked) ** 2)
    value = float(sigma_x2 / M ** 2 * (received - np.abs(P.P.sum()) ** 2))
    return max(value, 0.0)


def noise_power(G: EqualizerResponse, g: SystemGeometry, sigma_w2: float) -> float:
    """sigma_w~^2 = (sigma_w^2 N / M^2) sum_k |G_k|^2, summed over all L bins."""
    return float(sigma_w2 * g.N / g.M ** 2 * np.sum(np.abs(G.G) ** 2))


def sinr_terms(
    P: OverallResponse,
    G: EqualizerResponse,
    g: SystemGeometry,
    sigma_x2: float,
    sigma_w2: float,
) -> SinrTerms:
    """The three analytical powers."""
    return SinrTerms(
        useful=useful_power(P, sigma_x2),
        interference=interference_power(P, sigma_x2),
        noise=noise_power(G, g, sigma_w2),
    )


def sinr_from_noise_variance(
    P: OverallResponse,
    G: EqualizerResponse,
    g: SystemGeometry,
    sigma_x2: float,
    sigma_w2: float,
) -> float:
    """SINR composed from useful, interference and noise powers."""
    return sinr_terms(P, G, g, sigma_x2, sigma_w2).sinr


def analytical_sinr(
    P: OverallResponse,
    G: EqualizerResponse,
    w: SpectralWindow,
    ch: ChannelRealization,
    g: SystemGeometry,
    link: LinkBudget,
) -> float:
    """SINR in its Es/N0 form.

    |sum P|^2 / (M sum_r |sum_l P[lM+r]|^2 - |sum P|^2
    + (Es/N0)^-1 sum |H C_ext|^2 sum |G|^2)
    """
    total = np.abs(P.P.sum()) ** 2
    interference = max(g.M * np.sum(np.abs(P.stacked) ** 2) - total, 0.0)
    noise = _total_power(w, ch) * np.sum(np.abs(G.G) ** 2) / link.es_n0
    denominator = interference + noise
    if denominator <= 0:
        if total <= 0:
            raise DegenerateSystemError("overall response is identically zero")
        return float("inf")
    return float(total / denominator)


def lfdma_zf_sinr(
    ch: ChannelRealization, g: SystemGeometry, es_n0: float, user_block_index: int = 0
) -> float:
    """ZF with a rectangular window: Es/N0 M^2 / (sum |C_k|^2 sum |C_k|^-2)."""
    C = ch.C[user_block_index * g.M:(user_block_index + 1) * g.M]
    power = np.abs(C) ** 2
    if np.any(power <= 0):
        raise SingularSubchannelError(int(np.flatnonzero(power <= 0)[0]) % g.M)
    return float(es_n0 * g.M ** 2 / (power.sum() * np.sum(1.0 / power)))


def equivalent_noise(
    noise: npt.ArrayLike, G: EqualizerResponse, g: SystemGeometry
) -> npt.NDArray[np.complex128]:
    """Receiver noise at the symbol rate: up-sample, filter by g, then decimate."""
    return rx_time_equivalent(noise, G, g)


def _equalizer(
    kind: EqualizerKind,
    w: SpectralWindow,
    ch: ChannelRealization,
    g: SystemGeometry,
    es_n0: float,
    zf_response: EqualizerResponse,
) -> EqualizerResponse:
    if kind is EqualizerKind.ZF:
        return zf_response
    if kind is EqualizerKind.MMSE:
        return mmse(w, ch, g, es_n0)
    raise ScfdmaError(f"no SINR campaign for {kind.value} equalizers")


def _draw_channel(
    setup: SinrSetup, seed: int, index: int
) -> Tuple[ChannelRealization, np.random.Generator, int]:
    g = setup.geometry
    need_zf = EqualizerKind.ZF in setup.equalizers
    for attempt in range(MAX_REDRAWS):
        rng = substream(seed, index, attempt)
        ch = realize(setup.profile, rng, g, setup.normalize)
        if not need_zf:
            return ch, rng, attempt
        try:
            zf(setup.window, ch, g)
        except SingularSubchannelError as e:
            logging.warning(
                f"Realization {index} redrawn: "
                f"ZF singular on subchannel r={e.subchannel}"
            )
            continue
        return ch, rng, attempt
    raise DegenerateSystemError(
        f"realization {index} stayed ZF-singular after {MAX_REDRAWS} draws"
    )


def _one_realization(
    setup: SinrSetup, frames: int, seed: int, index: int
) -> _Draw:
    """Analytical and empirical quantities for one channel draw.

    Returns values of shape (equalizers, grid points, 6): analytical SINR,
    empirical SINR, the three analytical powers, and the empirical
    interference-to-useful ratio.
    """
    g, w = setup.geometry, setup.window
    ch, rng, attempts = _draw_channel(setup, seed, index)
    xb = SYMBOL_SOURCES[setup.constellation](rng, g.M, setup.sigma_x2, count=frames)
    unit_noise = awgn(rng, (frames, g.N), NoiseModel(1.0))
    zf_response = zf(w, ch, g) if EqualizerKind.ZF in setup.equalizers else None

    values = np.zeros((len(setup.equalizers), len(setup.es_n0_db), 6))
    for e, kind in enumerate(setup.equalizers):
        for p, es_n0_db in enumerate(setup.es_n0_db):
            es_n0 = 10.0 ** (es_n0_db / 10.0)
            link = LinkBudget.from_es_n0(es_n0, w, ch, g, setup.sigma_x2)
            G = _equalizer(kind, w, ch, g, link.es_n0, zf_response)
            P = overall_response(w, ch, G)
            terms = sinr_terms(P, G, g, setup.sigma_x2, link.sigma_w2)
            noise = np.sqrt(link.sigma_w2) * equivalent_noise(unit_noise, G, g)
            out = end_to_end_simplified(xb, P, noise, g)
            measured = SinrTerms(
                useful=float(np.mean(np.abs(out.useful) ** 2)),
                interference=float(np.mean(np.abs(out.interference) ** 2)),
                noise=float(np.mean(np.abs(out.noise) ** 2)),
            )
            values[e, p] = (
                analytical_sinr(P, G, w, ch, g, link),
                measured.sinr,
                terms.useful,
                terms.interference,
                terms.noise,
                measured.interference / measured.useful if measured.useful > 0 else 0.0,
            )
    return _Draw(values=values, attempts=attempts)


def _db(values: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(values)


def empirical_sinr(
    setup: SinrSetup,
    realizations: int,
    frames: int,
    seed: int,
    workers: int = 1,
    progress: bool = True,
) -> List[SinrReport]:
    """Monte Carlo SINR over block-fading realizations, one report per equalizer.

    Every realization draws its channel, symbols and unit noise from its own
    substream; the same draws serve every equalizer and grid point. Per
    realization the empirical SINR is the ratio of the accumulated useful
    power to the accumulated interference plus noise power over all symbol
    positions and frames. ZF-singular channels are redrawn and counted.

    Args:
        setup: Window, profile, geometry, grid and equalizers.
        realizations: Number of channel draws.
        frames: Frames per draw.
        seed: Master seed.
        workers: Threads.
        progress: Show a progress bar.

    Returns:
        List of SinrReport, ordered as ``setup.equalizers``.
    """
    if realizations < 1 or frames < 1:
        raise EstimationError("need at least one realization and one frame")

    def run(index: int) -> _Draw:
        return _one_realization(setup, frames, seed, index)

    draws = ordered_map(
        run, range(realizations), workers=workers, desc="Realizations",
        progress=progress, total=realizations,
    )
    stacked = np.stack([d.values for d in draws])
    dropped = sum(d.attempts for d in draws)

    analytical = stacked[..., 0]
    empirical = stacked[..., 1]
    with np.errstate(invalid="ignore", divide="ignore"):
        mean_emp = empirical.mean(axis=0)
        if realizations > 1:
            spread = 1.96 * empirical.std(axis=0, ddof=1) / np.sqrt(realizations)
        else:
            spread = np.zeros_like(mean_emp)
        ci_db = np.where(
            np.isfinite(mean_emp), _db(1.0 + spread / mean_emp), 0.0
        )
    analytical_dbmean = _db(analytical).mean(axis=0)
    empirical_dbmean = _db(empirical).mean(axis=0)
    per_term = stacked[..., 2:5].mean(axis=0)
    free = np.all(stacked[..., 5] <= INTERFERENCE_FREE, axis=0)

    reports = []
    for e, kind in enumerate(setup.equalizers):
        points = [
            SinrPoint(
                es_n0_db=float(es_n0_db),
                analytical=float(analytical[:, e, p].mean()),
                empirical=float(mean_emp[e, p]),
                ci_halfwidth=float(ci_db[e, p]),
                useful=float(per_term[e, p, 0]),
                interference=float(per_term[e, p, 1]),
                noise=float(per_term[e, p, 2]),
                analytical_dbmean=float(analytical_dbmean[e, p]),
                empirical_dbmean=float(empirical_dbmean[e, p]),
                interference_free=bool(free[e, p]),
            )
            for p, es_n0_db in enumerate(setup.es_n0_db)
        ]
        reports.append(
            SinrReport(
                equalizer=kind,
                points=points,
                realizations=realizations,
                dropped_realizations=dropped,
            )
        )
    if dropped:
        logging.warning(f"{dropped} ZF-singular realizations redrawn")
    return reports


def sinr_grid(start_db: float, step_db: float, stop_db: float) -> Tuple[float, ...]:
    """Inclusive Es/N0 grid in dB."""
    if step_db <= 0 or stop_db < start_db:
        raise ConfigError(f"invalid Es/N0 grid {start_db}:{step_db}:{stop_db}")
    count = int(np.floor((stop_db - start_db) / step_db + 1e-9)) + 1
    return tuple(float(start_db + i * step_db) for i in range(count))


def by_equalizer(reports: Sequence[SinrReport]) -> Dict[EqualizerKind, SinrReport]:
    """Index reports by equalizer kind."""
    return {report.equalizer: report for report in reports}
