"""Test equalizer responses and the overall response."""
import unittest

import numpy as np
from parameterized import parameterized

from scfdma.channel import ChannelRealization, pedestrian_a_profile, realize
from scfdma.dft import circular_convolve
from scfdma.equalize import (
    EqualizerKind,
    EqualizerResponse,
    OverallResponse,
    mmse,
    mmse_from_variances,
    overall_response,
    zf,
    zf_noise_gain,
)
from scfdma.geometry import derive_geometry
from scfdma.shaping import rectangular_window, rrc_window
from scfdma.sinr import es_n0_to_sigma_w2
from scfdma.utils.errors import (
    BlockLengthError,
    ConfigError,
    ScfdmaError,
    SingularSubchannelError,
)


class TestEqualize(unittest.TestCase):
    """Test class for ZF and MMSE responses."""

    def setUp(self) -> None:
        """Set up the LTE geometry and a seeded generator."""
        self.g = derive_geometry(10, 512, 31)
        self.rng = np.random.default_rng(5)

    @parameterized.expand([["rect"], ["rrc"]])
    def test_zero_forcing_alias_sums(self, kind):
        """Test every alias class of P sums to one."""
        w = rrc_window(self.g, 0.35) if kind == "rrc" else rectangular_window(self.g)
        for _ in range(10):
            ch = realize(pedestrian_a_profile(), self.rng, self.g)
            G = zf(w, ch, self.g)
            self.assertEqual(G.kind, EqualizerKind.ZF)
            P = overall_response(w, ch, G)
            np.testing.assert_allclose(P.stacked, np.ones(10), atol=1e-10)

    def test_zero_forcing_rectangular_unit_channel(self):
        """Test P = 1 on the occupied bins and 0 elsewhere."""
        w = rectangular_window(self.g)
        ch = ChannelRealization.unit(self.g)
        P = overall_response(w, ch, zf(w, ch, self.g))
        expected = np.zeros(self.g.L)
        expected[:10] = 1.0
        np.testing.assert_allclose(P.P, expected, atol=1e-12)

    def test_zero_forcing_decimated_impulse(self):
        """Test p(n L_M) is an impulse of height 1/L_M."""
        w = rrc_window(self.g, 0.35)
        ch = realize(pedestrian_a_profile(), self.rng, self.g)
        P = overall_response(w, ch, zf(w, ch, self.g))
        expected = np.zeros(10)
        expected[0] = 1.0 / self.g.L_M
        np.testing.assert_allclose(P.decimated, expected, atol=1e-12)

    def test_zero_forcing_singular(self):
        """Test a channel null on a rectangular bin names the subchannel."""
        g = derive_geometry(4, 8, 2)
        ch = ChannelRealization.from_taps([0, 1], [1.0, -1.0], g)
        with self.assertRaises(SingularSubchannelError) as context:
            zf(rectangular_window(g), ch, g)
        self.assertEqual(context.exception.subchannel, 0)

    def test_zero_forcing_other_geometry(self):
        """Test a channel from another geometry is rejected."""
        ch = ChannelRealization.unit(derive_geometry(12, 512, 31))
        with self.assertRaises(BlockLengthError):
            zf(rectangular_window(self.g), ch, self.g)

    def test_support_only(self):
        """Test G vanishes wherever H does."""
        w = rrc_window(self.g, 0.35)
        ch = realize(pedestrian_a_profile(), self.rng, self.g)
        for G in (zf(w, ch, self.g), mmse(w, ch, self.g, 10.0)):
            np.testing.assert_array_equal(G.G[w.H == 0], 0)

    def test_mmse_flat_channel(self):
        """Test a unit channel gives G = 1 / (1 + 1/es_n0) on the M bins."""
        w = rectangular_window(self.g)
        G = mmse(w, ChannelRealization.unit(self.g), self.g, 4.0)
        np.testing.assert_allclose(G.G[:10], np.full(10, 1.0 / 1.25))
        self.assertEqual(G.kind, EqualizerKind.MMSE)

    def test_mmse_approaches_zero_forcing(self):
        """Test MMSE tends to ZF at high Es/N0."""
        w = rrc_window(self.g, 0.35)
        ch = realize(pedestrian_a_profile(), self.rng, self.g)
        G_zf = zf(w, ch, self.g).G
        G_mmse = mmse(w, ch, self.g, 1e12).G
        self.assertLess(np.abs(G_mmse - G_zf).max() / np.abs(G_zf).max(), 1e-9)

    def test_mmse_from_variances(self):
        """Test the variance form matches the Es/N0 form."""
        w = rrc_window(self.g, 0.35)
        ch = realize(pedestrian_a_profile(), self.rng, self.g)
        sigma_w2 = es_n0_to_sigma_w2(3.0, w, ch, self.g, sigma_x2=2.0)
        np.testing.assert_allclose(
            mmse_from_variances(w, ch, 2.0, sigma_w2).G,
            mmse(w, ch, self.g, 3.0).G,
            atol=1e-14,
        )

    def test_mmse_rejects_non_positive_snr(self):
        """Test Es/N0 must be positive."""
        with self.assertRaises(ConfigError) as cm:
            mmse(rectangular_window(self.g), ChannelRealization.unit(self.g), self.g, 0)
        self.assertIsInstance(cm.exception, ScfdmaError)

    def test_decimated_is_subsampled_time_response(self):
        """Test IDFT_M(stack(P, M)) equals p(n L_M)."""
        g = derive_geometry(6, 8, 2)
        P = OverallResponse(
            P=self.rng.standard_normal(g.L) + 1j * self.rng.standard_normal(g.L),
            geometry=g,
        )
        np.testing.assert_allclose(P.decimated, P.p_time[::g.L_M], atol=1e-14)

    def test_time_response_is_cascade(self):
        """Test p = h * c * g in the time domain."""
        w = rrc_window(self.g, 0.35)
        ch = realize(pedestrian_a_profile(), self.rng, self.g)
        G = mmse(w, ch, self.g, 10.0)
        P = overall_response(w, ch, G)
        cascade = circular_convolve(circular_convolve(w.h, ch.c_time), G.g_time)
        np.testing.assert_allclose(P.p_time, cascade, atol=1e-14)

    def test_zero_response(self):
        """Test an all-zero G gives an all-zero overall response."""
        w = rectangular_window(self.g)
        G = EqualizerResponse(G=np.zeros(self.g.L))
        P = overall_response(w, ChannelRealization.unit(self.g), G)
        np.testing.assert_array_equal(P.P, np.zeros(self.g.L))

    def test_zero_forcing_noise_gain(self):
        """Test the closed form sum_r 1/D_r against sum |G|^2."""
        w = rrc_window(self.g, 0.35)
        ch = realize(pedestrian_a_profile(), self.rng, self.g)
        G = zf(w, ch, self.g)
        np.testing.assert_allclose(
            zf_noise_gain(w, ch), np.sum(np.abs(G.G) ** 2), rtol=1e-10
        )
