"""Test transmit windows."""
import unittest

import numpy as np
from parameterized import parameterized

from scfdma.dft import inverse_dft
from scfdma.geometry import derive_geometry
from scfdma.shaping import (
    ShapingConfig,
    SpectralWindow,
    WindowKind,
    build_window,
    raised_cosine,
    rectangular_window,
    rrc_window,
)
from scfdma.utils.errors import WindowError


class TestShaping(unittest.TestCase):
    """Test class for rectangular and root-raised-cosine windows."""

    def setUp(self) -> None:
        """Set up the LTE and toy geometries."""
        self.lte = derive_geometry(10, 512, 31)
        self.toy = derive_geometry(4, 8, 2)

    def test_rectangular_window(self):
        """Test unit gain on the M user bins only."""
        w = rectangular_window(self.toy)
        np.testing.assert_array_equal(w.H, [1, 1, 1, 1, 0, 0, 0, 0])
        np.testing.assert_array_equal(w.support, [0, 1, 2, 3])
        np.testing.assert_allclose(w.h, inverse_dft(w.H))
        self.assertEqual(w.occupied, 4)

    def test_rectangular_window_block_must_fit(self):
        """Test a block beyond the IFFT band is rejected."""
        with self.assertRaises(WindowError):
            rectangular_window(self.toy, user_block_index=2)

    def test_rrc_support_and_edges(self):
        """Test U = M + 2 M_alpha bins with quantized transition."""
        w = rrc_window(self.lte, 0.35)
        np.testing.assert_array_equal(w.support, np.arange(9, 21))
        self.assertAlmostEqual(w.effective_rolloff, 0.2)
        self.assertAlmostEqual(abs(w.H[9]) ** 2, (1 - np.sqrt(0.5)) / 2, places=12)
        self.assertAlmostEqual(abs(w.H[19]) ** 2, (1 + np.sqrt(0.5)) / 2, places=12)
        np.testing.assert_allclose(w.H[11:19], np.ones(8))

    def test_rrc_complementary_power(self):
        """Test bins k and k + M of the transition carry complementary power."""
        for M in (10, 12, 16, 20):
            g = derive_geometry(M, 512, 31)
            w = rrc_window(g, 0.35)
            power = np.abs(w.H) ** 2
            folded = power.reshape(g.L_M, g.M).sum(axis=0)
            np.testing.assert_allclose(folded, np.ones(M), atol=1e-12)

    def test_rrc_zero_rolloff_is_rectangular(self):
        """Test alpha = 0 gives the rectangular window on the same block."""
        np.testing.assert_allclose(
            rrc_window(self.lte, 0.0).H, rectangular_window(self.lte, 1).H
        )

    @parameterized.expand([[-0.1], [1.5]])
    def test_rrc_rejects_rolloff(self, alpha):
        """Test roll-off outside [0, 1]."""
        with self.assertRaises(WindowError):
            rrc_window(self.lte, alpha)

    def test_rrc_rejects_nyquist_violation(self):
        """Test N < 2(1 + alpha)M."""
        with self.assertRaisesRegex(WindowError, "Nyquist"):
            rrc_window(self.toy, 0.35)

    def test_rrc_rejects_support_below_zero(self):
        """Test a shaped window on block 0 spills below bin 0."""
        with self.assertRaises(WindowError):
            rrc_window(self.lte, 0.35, user_block_index=0)

    def test_raised_cosine(self):
        """Test flat top, zero stop band and the transition symmetry."""
        self.assertEqual(raised_cosine(0.0, 0.2), 1.0)
        self.assertEqual(raised_cosine(0.7, 0.2), 0.0)
        f = np.linspace(0.4, 0.6, 11)
        np.testing.assert_allclose(
            raised_cosine(f, 0.2) + raised_cosine(f - 1.0, 0.2), np.ones(11)
        )

    def test_build_window(self):
        """Test dispatch and the per-kind default block."""
        rect = build_window(self.lte, ShapingConfig())
        shaped = build_window(
            self.lte, ShapingConfig(WindowKind.ROOT_RAISED_COSINE, 0.35)
        )
        self.assertEqual(rect.kind, WindowKind.RECTANGULAR)
        self.assertEqual(rect.user_block_index, 0)
        self.assertEqual(shaped.user_block_index, 1)
        with self.assertRaises(WindowError):
            build_window(self.lte, ShapingConfig(WindowKind.CUSTOM))

    def test_from_response(self):
        """Test arbitrary responses and the length check."""
        H = np.zeros(self.toy.L, dtype=complex)
        H[2:6] = 1j
        w = SpectralWindow.from_response(H, self.toy)
        self.assertEqual(w.kind, WindowKind.CUSTOM)
        np.testing.assert_array_equal(w.support, [2, 3, 4, 5])
        with self.assertRaises(WindowError):
            SpectralWindow.from_response(np.ones(5), self.toy)

    def test_window_is_read_only(self):
        """Test H and h cannot be modified in place."""
        w = rectangular_window(self.toy)
        with self.assertRaises(ValueError):
            w.H[0] = 2.0
        with self.assertRaises(ValueError):
            w.h[0] = 2.0
