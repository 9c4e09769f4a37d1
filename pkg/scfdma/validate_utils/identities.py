"""Noble identities and frequency/time path equivalence."""
import numpy as np

from scfdma.dft import (
    circular_convolve,
    circular_convolve_direct,
    downsample,
    forward_dft,
    repeat,
    stack,
    upsample,
)
from scfdma.equalize import EqualizerResponse
from scfdma.geometry import SystemGeometry
from scfdma.txchain import (
    qpsk_symbols,
    rx_combining,
    rx_reference,
    rx_time_equivalent,
    tx_copying,
    tx_reference,
    tx_time_equivalent,
)
from scfdma.validate_utils.check import Check, windows_for


def _complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class NobleIdentityCheck(Check):
    """Up-sampling repeats the spectrum, decimation stacks it."""

    name = "noble-identities"
    tolerance = 1e-10
    trials = 20

    def measure(self, g: SystemGeometry, rng: np.random.Generator) -> float:
        """Worst deviation of the three identities."""
        x = _complex(rng, (self.trials, g.M))
        up = np.abs(forward_dft(upsample(x, g.L_M)) - repeat(forward_dft(x), g.L_M))

        d = _complex(rng, (self.trials, g.L))
        down = np.abs(forward_dft(downsample(d, g.L_N)) - stack(forward_dft(d), g.N))

        a, b = _complex(rng, g.L), _complex(rng, g.L)
        conv = np.abs(circular_convolve(a, b) - circular_convolve_direct(a, b))
        return max(up.max(), down.max(), conv.max())


class PathEquivalenceCheck(Check):
    """Frequency path, time path and classical copy/combine agree."""

    name = "path-equivalence"
    tolerance = 1e-9
    trials = 1000

    def measure(self, g: SystemGeometry, rng: np.random.Generator) -> float:
        """Worst transmit or receive deviation over every window."""
        worst = 0.0
        for w in windows_for(g, rng):
            xb = qpsk_symbols(rng, g.M, count=self.trials)
            y_ref = tx_reference(xb, w, g).samples
            tx = max(
                np.abs(y_ref - tx_time_equivalent(xb, w, g).samples).max(),
                np.abs(y_ref - tx_copying(xb, w, g).samples).max(),
            )

            G = EqualizerResponse(G=np.conj(w.H))
            r = _complex(rng, (self.trials, g.N))
            x_ref = rx_reference(r, G, g)
            rx = max(
                np.abs(x_ref - rx_time_equivalent(r, G, g)).max(),
                np.abs(x_ref - rx_combining(r, G, g)).max(),
            )
            worst = max(worst, tx, rx)
        return worst
