"""Test the transmitter and receiver paths."""
import unittest

import numpy as np
from parameterized import parameterized

from scfdma.channel import (
    ChannelRealization,
    NoiseModel,
    awgn,
    circular_filter,
    linear_filter,
    pedestrian_a_profile,
    realize,
)
from scfdma.equalize import EqualizerResponse, overall_response, zf
from scfdma.geometry import derive_geometry, nyquist_check
from scfdma.shaping import SpectralWindow, rectangular_window, rrc_window
from scfdma.txchain import (
    SymbolBlock,
    TimeFrame,
    add_cp,
    end_to_end_simplified,
    gaussian_symbols,
    qpsk_symbols,
    remove_cp,
    rx_combining,
    rx_reference,
    rx_time_equivalent,
    split_stream,
    transmit_stream,
    tx_copying,
    tx_direct_rectangular,
    tx_reference,
    tx_time_equivalent,
)
from scfdma.utils.errors import ConfigError, FrameError, WindowError

GEOMETRIES = [[4, 8, 2], [6, 8, 2], [10, 512, 31], [12, 512, 31]]


def windows(g, rng):
    """Rectangular, shaped when admissible, and a random custom window."""
    out = [rectangular_window(g)]
    if nyquist_check(g, 0.35) and g.M < g.N:
        out.append(rrc_window(g, 0.35))
    H = np.zeros(g.L, dtype=complex)
    H[:g.N] = rng.standard_normal(g.N) + 1j * rng.standard_normal(g.N)
    out.append(SpectralWindow.from_response(H, g))
    return out


class TestTxChain(unittest.TestCase):
    """Test class for the frame-level transmit and receive chains."""

    def setUp(self) -> None:
        """Set up a seeded generator."""
        self.rng = np.random.default_rng(11)

    def test_identity_when_m_equals_n(self):
        """Test a full-band rectangular window passes the symbols through."""
        g = derive_geometry(8, 8, 0)
        xb = gaussian_symbols(self.rng, 8)
        y = tx_reference(xb, rectangular_window(g), g)
        np.testing.assert_allclose(y.samples, xb.x, atol=1e-12)

    @parameterized.expand([[4, 8, 2], [10, 512, 31]])
    def test_rectangular_matches_direct_lfdma(self, M, N, N_g):
        """Test the generalized chain reduces to plain LFDMA."""
        g = derive_geometry(M, N, N_g)
        xb = qpsk_symbols(self.rng, M, count=20)
        ours = tx_reference(xb, rectangular_window(g), g).samples
        direct = tx_direct_rectangular(xb, g).samples
        np.testing.assert_allclose(ours, direct, atol=1e-12)

    @parameterized.expand(GEOMETRIES)
    def test_time_path_matches_frequency_path(self, M, N, N_g):
        """Test the multirate time path against the DFT path for many frames."""
        g = derive_geometry(M, N, N_g)
        count = 1000 if g.L <= 64 else 50
        for w in windows(g, self.rng):
            xb = gaussian_symbols(self.rng, M, count=count)
            ref = tx_reference(xb, w, g).samples
            time = tx_time_equivalent(xb, w, g).samples
            scale = max(1.0, np.abs(ref).max())
            self.assertLess(np.abs(ref - time).max() / scale, 1e-9)

    @parameterized.expand(GEOMETRIES)
    def test_receiver_paths_agree(self, M, N, N_g):
        """Test both receiver paths for an arbitrary response."""
        g = derive_geometry(M, N, N_g)
        G = EqualizerResponse(
            G=self.rng.standard_normal(g.L) + 1j * self.rng.standard_normal(g.L)
        )
        r = self.rng.standard_normal((50, N)) + 1j * self.rng.standard_normal((50, N))
        ref = rx_reference(r, G, g)
        time = rx_time_equivalent(r, G, g)
        self.assertLess(np.abs(ref - time).max() / np.abs(ref).max(), 1e-9)

    @parameterized.expand([[4, 8, 2], [10, 512, 31]])
    def test_copying_and_combining(self, M, N, N_g):
        """Test the classical copy transmitter and combining receiver."""
        g = derive_geometry(M, N, N_g)
        w = rrc_window(g, 0.35) if nyquist_check(g, 0.35) else rectangular_window(g)
        xb = gaussian_symbols(self.rng, M, count=10)
        np.testing.assert_allclose(
            tx_copying(xb, w, g).samples, tx_reference(xb, w, g).samples, atol=1e-12
        )
        G = EqualizerResponse(G=np.conj(w.H))
        r = self.rng.standard_normal((10, N)) + 0j
        np.testing.assert_allclose(
            rx_combining(r, G, g), rx_reference(r, G, g), atol=1e-12
        )

    def test_impulse_response(self):
        """Test a unit symbol yields the decimated filter L_N h(n L_N)."""
        g = derive_geometry(10, 512, 31)
        w = rrc_window(g, 0.35)
        x = np.zeros(10, dtype=complex)
        x[0] = 1.0
        y = tx_time_equivalent(SymbolBlock(x=x), w, g).samples
        np.testing.assert_allclose(y, g.L_N * w.h[::g.L_N], atol=1e-14)

    def test_zero_input(self):
        """Test silence in, silence out."""
        g = derive_geometry(6, 8, 2)
        y = tx_reference(SymbolBlock(x=np.zeros(6)), rectangular_window(g), g)
        np.testing.assert_array_equal(y.samples, np.zeros(8))

    def test_window_of_other_geometry(self):
        """Test a window built for another geometry is rejected."""
        g = derive_geometry(6, 8, 2)
        w = rectangular_window(derive_geometry(4, 8, 2))
        with self.assertRaises(WindowError):
            tx_reference(gaussian_symbols(self.rng, 6), w, g)

    def test_cyclic_prefix(self):
        """Test the prefix copies the frame tail and comes off again."""
        g = derive_geometry(2, 4, 2)
        framed = add_cp(TimeFrame(samples=[1, 2, 3, 4]), g)
        np.testing.assert_array_equal(framed.samples, [3, 4, 1, 2, 3, 4])
        self.assertTrue(framed.has_cp)
        np.testing.assert_array_equal(remove_cp(framed, g).samples, [1, 2, 3, 4])
        with self.assertRaises(FrameError):
            add_cp(framed, g)
        with self.assertRaises(FrameError):
            remove_cp(TimeFrame(samples=[1, 2, 3, 4]), g)

    def test_empty_cyclic_prefix(self):
        """Test N_g = 0 leaves the samples alone."""
        g = derive_geometry(2, 4, 0)
        framed = add_cp(TimeFrame(samples=[1, 2, 3, 4]), g)
        np.testing.assert_array_equal(framed.samples, [1, 2, 3, 4])

    def test_receiver_rejects_prefixed_frame(self):
        """Test the receiver wants the prefix removed first."""
        g = derive_geometry(4, 8, 2)
        framed = add_cp(TimeFrame(samples=np.ones(8)), g)
        with self.assertRaises(FrameError):
            rx_reference(framed, EqualizerResponse(G=np.ones(8)), g)

    def test_receiver_identity_when_m_equals_n(self):
        """Test a unit response at M = N returns the input."""
        g = derive_geometry(8, 8, 0)
        r = self.rng.standard_normal(8) + 1j * self.rng.standard_normal(8)
        x_hat = rx_reference(r, EqualizerResponse(G=np.ones(8)), g)
        np.testing.assert_allclose(x_hat, r, atol=1e-12)

    def test_receiver_impulse_with_unit_response(self):
        """Test an impulse through an all-ones response folds to L_M."""
        g = derive_geometry(4, 8, 2)
        r = np.zeros(8)
        r[0] = 1.0
        x_hat = rx_time_equivalent(r, EqualizerResponse(G=np.ones(8)), g)
        np.testing.assert_allclose(x_hat, [2, 0, 0, 0], atol=1e-12)

    @parameterized.expand(
        [["rect", 4, 8, 2], ["rect", 10, 512, 31], ["rrc", 10, 512, 31]]
    )
    def test_loopback_with_zero_forcing(self, kind, M, N, N_g):
        """Test ZF over a unit channel recovers the symbols."""
        g = derive_geometry(M, N, N_g)
        w = rrc_window(g, 0.35) if kind == "rrc" else rectangular_window(g)
        G = zf(w, ChannelRealization.unit(g), g)
        xb = qpsk_symbols(self.rng, M, count=5)
        y = tx_reference(xb, w, g)
        np.testing.assert_allclose(rx_reference(y, G, g), xb.x, atol=1e-10)

    def test_simplified_model_matches_full_chain(self):
        """Test the full chain against useful + interference + noise."""
        g = derive_geometry(10, 512, 31)
        w = rrc_window(g, 0.35)
        ch = realize(pedestrian_a_profile(), self.rng, g)
        G = zf(w, ch, g)
        P = overall_response(w, ch, G)
        xb = qpsk_symbols(self.rng, 10, count=8)
        noise = awgn(self.rng, (8, 512), NoiseModel(0.01))
        r = circular_filter(tx_time_equivalent(xb, w, g).samples, ch) + noise
        full = rx_time_equivalent(r, G, g)
        model = end_to_end_simplified(xb, P, rx_time_equivalent(noise, G, g), g)
        np.testing.assert_allclose(full, model.estimate, atol=1e-10)
        np.testing.assert_allclose(model.useful, xb.x, atol=1e-10)
        np.testing.assert_allclose(model.interference, np.zeros((8, 10)), atol=1e-10)

    def test_prefixed_stream_matches_circular_channel(self):
        """Test the prefix turns the tapped delay line into a circular channel."""
        g = derive_geometry(10, 512, 31)
        w = rectangular_window(g)
        xb = qpsk_symbols(self.rng, 10, count=6)
        channels = [realize(pedestrian_a_profile(), self.rng, g) for _ in range(6)]
        y = tx_reference(xb, w, g)
        stream = transmit_stream(add_cp(y, g), channels)
        self.assertEqual(stream.shape, (6 * g.N_t,))
        received = remove_cp(split_stream(stream, g), g).samples
        for f, ch in enumerate(channels):
            np.testing.assert_allclose(
                received[f], circular_filter(y.samples[f], ch), atol=1e-12
            )
        with self.assertRaises(FrameError):
            transmit_stream(add_cp(y, g), channels[:2])

    def test_single_frame_stream_is_linear_filter(self):
        """Test one frame through the delay line is its causal linear convolution."""
        g = derive_geometry(6, 8, 3)
        xb = qpsk_symbols(self.rng, 6, count=1)
        ch = realize(pedestrian_a_profile(), self.rng, g)
        framed = add_cp(tx_reference(xb, rectangular_window(g), g), g)
        np.testing.assert_allclose(
            transmit_stream(framed, ch),
            linear_filter(framed.samples[0], ch),
            atol=1e-12,
        )

    def test_rectangular_transmit_energy(self):
        """Test mean |y|^2 is (M/N)^2 sigma_x^2 for QPSK frames."""
        g = derive_geometry(10, 512, 31)
        xb = qpsk_symbols(self.rng, 10, sigma_x2=2.0, count=30)
        y = tx_reference(xb, rectangular_window(g), g).samples
        power = np.mean(np.abs(y) ** 2, axis=-1)
        expected = np.full(30, 2.0 * (10 / 512) ** 2)
        np.testing.assert_allclose(power, expected, rtol=1e-12)

    def test_qpsk_unit_modulus(self):
        """Test every QPSK symbol has power sigma_x^2."""
        xb = qpsk_symbols(self.rng, 16, sigma_x2=0.5, count=100)
        np.testing.assert_allclose(np.abs(xb.x) ** 2, np.full((100, 16), 0.5))
        with self.assertRaises(ConfigError):
            qpsk_symbols(self.rng, 4, sigma_x2=0.0)
