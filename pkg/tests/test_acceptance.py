"""Full-scale PSD and SINR runs on the LTE geometry.

Slow; enabled with SCFDMA_ACCEPTANCE=1.
"""
import os
import unittest

import numpy as np
from parameterized import parameterized

from scfdma.campaigns import run_psd, run_sinr
from scfdma.config import build_config

ENABLED = os.environ.get("SCFDMA_ACCEPTANCE") == "1"


@unittest.skipUnless(ENABLED, "set SCFDMA_ACCEPTANCE=1 to run")
class TestAcceptance(unittest.TestCase):
    """Test class for the LTE-scale campaigns."""

    @parameterized.expand([["rect", 0.0], ["rrc", 0.35]])
    def test_psd_match(self, shaping, rolloff):
        """Test Welch and analytical PSD agree within 1 dB over 60 dB."""
        config = build_config(
            "lte5", overrides={"shaping": shaping, "rolloff": rolloff, "seed": 1}
        )
        result = run_psd(config, progress=False)
        self.assertLess(result.max_deviation_db, 1.0)

    @parameterized.expand([["rect", 0.0], ["rrc", 0.35]])
    def test_sinr_reproduction(self, shaping, rolloff):
        """Test mean empirical SINR within 0.3 dB of the analytical mean."""
        config = build_config(
            "lte5", overrides={"shaping": shaping, "rolloff": rolloff, "seed": 2}
        )
        for report in run_sinr(config, progress=False):
            for point in report.points:
                gap = 10 * np.log10(point.empirical / point.analytical)
                self.assertLess(abs(gap), 0.3, msg=f"{report.equalizer} {point}")
