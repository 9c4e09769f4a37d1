"""The parent Check class."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from scfdma.channel import (
    ChannelRealization,
    exponential_profile,
    pedestrian_a_profile,
    realize,
)
from scfdma.geometry import SystemGeometry, derive_geometry
from scfdma.shaping import SpectralWindow, WindowKind, rectangular_window, rrc_window
from scfdma.utils.errors import WindowError
from scfdma.utils.rng_utils import substream

DEFAULT_GEOMETRIES: Tuple[Tuple[int, int, int], ...] = (
    (4, 8, 2),
    (6, 8, 2),
    (10, 512, 31),
    (12, 512, 31),
)

SHAPED_ROLLOFF = 0.35

LTE_PREFIX = (512, 31)


def default_prefix(N: int) -> int:
    """The LTE prefix scaled to N, at least the Pedestrian A delay spread."""
    fft_size, prefix = LTE_PREFIX
    scaled = (N * prefix + fft_size // 2) // fft_size
    return max(scaled, pedestrian_a_profile().max_delay)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check over all geometries."""

    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ""


def windows_for(g: SystemGeometry, rng: np.random.Generator) -> List[SpectralWindow]:
    """Rectangular, shaped when admissible, and a random full-band window."""
    windows = [rectangular_window(g)]
    try:
        windows.append(rrc_window(g, SHAPED_ROLLOFF))
    except WindowError:
        logging.info(f"No shaped window for M={g.M}, N={g.N}")
    H = np.zeros(g.L, dtype=np.complex128)
    H[:g.N] = rng.standard_normal(g.N) + 1j * rng.standard_normal(g.N)
    windows.append(SpectralWindow.from_response(H, g, WindowKind.CUSTOM))
    return windows


def channel_for(g: SystemGeometry, rng: np.random.Generator) -> ChannelRealization:
    """Pedestrian A when the prefix covers it, else one tap per prefix sample."""
    profile = pedestrian_a_profile()
    if profile.max_delay > g.N_g:
        profile = exponential_profile(g.N_g + 1)
    return realize(profile, rng, g)


class Check:
    """Parent class for validation checks, run over a set of geometries."""

    name = "check"
    tolerance = 1e-9

    def __init__(
        self,
        geometries: Sequence[Tuple[int, int, int]] = DEFAULT_GEOMETRIES,
        seed: int = 0,
        trials: Optional[int] = None,
    ):
        """Keep the geometries, seed and trial count."""
        self.geometries = [derive_geometry(*triple) for triple in geometries]
        self.seed = seed
        if trials is not None:
            self.trials = trials

    def measure(self, g: SystemGeometry, rng: np.random.Generator) -> float:
        """Return the largest error of the check on one geometry."""
        raise NotImplementedError

    def run(self) -> CheckResult:
        """Run on every geometry and compare the worst error to the tolerance."""
        worst = 0.0
        worst_at = ""
        for index, g in enumerate(self.geometries):
            logging.info(f"Checking {self.name} on M={g.M}, N={g.N}, N_g={g.N_g}")
            error = float(self.measure(g, substream(self.seed, index)))
            if np.isnan(error):
                error = float("inf")
            if error > worst:
                worst, worst_at = error, f"M={g.M}, N={g.N}"
        passed = worst <= self.tolerance
        detail = f"max error {worst:.3g} at {worst_at}" if worst_at else "max error 0"
        return CheckResult(
            name=self.name,
            passed=passed,
            max_error=worst,
            tolerance=self.tolerance,
            detail=detail,
        )
