"""Cyclic prefix turns the linear channel into a circular one."""
import numpy as np

from scfdma.channel import NoiseModel, awgn, circular_filter
from scfdma.equalize import overall_response, zf
from scfdma.geometry import SystemGeometry
from scfdma.txchain import (
    SymbolBlock,
    add_cp,
    end_to_end_simplified,
    qpsk_symbols,
    remove_cp,
    rx_time_equivalent,
    split_stream,
    transmit_stream,
    tx_time_equivalent,
)
from scfdma.utils.errors import SingularSubchannelError
from scfdma.validate_utils.check import Check, channel_for, windows_for


class CpCircularizationCheck(Check):
    """Stream simulation with CP removal against the circular and simplified models."""

    name = "cp-circularization"
    tolerance = 1e-9
    trials = 8

    def measure(self, g: SystemGeometry, rng: np.random.Generator) -> float:
        """Worst per-frame deviation, channel and simplified model."""
        worst = 0.0
        for w in windows_for(g, rng):
            channels = [channel_for(g, rng) for _ in range(self.trials)]
            xb = qpsk_symbols(rng, g.M, count=self.trials)
            tx = tx_time_equivalent(xb, w, g)
            stream = transmit_stream(add_cp(tx, g), channels)
            received = remove_cp(split_stream(stream, g), g).samples
            noise = awgn(rng, (self.trials, g.N), NoiseModel(0.01))

            for f, ch in enumerate(channels):
                expected = circular_filter(tx.samples[f], ch)
                worst = max(worst, np.abs(received[f] - expected).max())
                try:
                    G = zf(w, ch, g)
                except SingularSubchannelError:
                    continue
                full = rx_time_equivalent(received[f] + noise[f], G, g)
                simplified = end_to_end_simplified(
                    SymbolBlock(xb.x[f]),
                    overall_response(w, ch, G),
                    rx_time_equivalent(noise[f], G, g),
                    g,
                )
                worst = max(worst, np.abs(full - simplified.estimate).max())
        return worst
