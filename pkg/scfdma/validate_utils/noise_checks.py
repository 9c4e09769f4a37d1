"""Variance of the equivalent receiver noise."""
import numpy as np

from scfdma.channel import NoiseModel, awgn
from scfdma.equalize import zf
from scfdma.geometry import SystemGeometry
from scfdma.sinr import equivalent_noise, noise_power
from scfdma.utils.errors import SingularSubchannelError
from scfdma.validate_utils.check import Check, channel_for, windows_for

BATCH = 1000


class NoiseVarianceCheck(Check):
    """Position-averaged variance of the equivalent noise against its closed form."""

    name = "noise-variance"
    tolerance = 0.01
    trials = 100000

    def measure(self, g: SystemGeometry, rng: np.random.Generator) -> float:
        """Relative error of the measured variance, worst over the windows."""
        worst = 0.0
        noise = NoiseModel(1.0)
        for w in windows_for(g, rng):
            try:
                G = zf(w, channel_for(g, rng), g)
            except SingularSubchannelError:
                continue
            total = 0.0
            for start in range(0, self.trials, BATCH):
                count = min(BATCH, self.trials - start)
                samples = equivalent_noise(awgn(rng, (count, g.N), noise), G, g)
                total += float(np.sum(np.abs(samples) ** 2))
            measured = total / (self.trials * g.M)
            expected = noise_power(G, g, noise.sigma_w2)
            worst = max(worst, abs(measured / expected - 1.0))
        return worst
