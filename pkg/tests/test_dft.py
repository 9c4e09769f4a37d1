"""Test the transform conventions and multirate primitives."""
import unittest

import numpy as np
from parameterized import parameterized

from scfdma.dft import (
    circular_convolve,
    circular_convolve_direct,
    downsample,
    forward_dft,
    inverse_dft,
    override_normalization,
    repeat,
    stack,
    upsample,
)
from scfdma.geometry import derive_geometry
from scfdma.utils.errors import BlockLengthError


class TestDft(unittest.TestCase):
    """Test class for the dft module."""

    def setUp(self) -> None:
        """Seed a generator."""
        self.rng = np.random.default_rng(1)

    def random(self, *shape):
        """Random complex array."""
        return self.rng.standard_normal(shape) + 1j * self.rng.standard_normal(shape)

    def test_unnormalized_forward(self):
        """Test the forward transform carries no factor and the inverse 1/A."""
        impulse = np.zeros(6)
        impulse[0] = 1.0
        np.testing.assert_allclose(forward_dft(impulse), np.ones(6))
        np.testing.assert_allclose(inverse_dft(np.ones(6)), impulse, atol=1e-15)

    def test_round_trip(self):
        """Test inverse(forward(x)) == x for an odd length."""
        x = self.random(15)
        np.testing.assert_allclose(inverse_dft(forward_dft(x)), x, atol=1e-12)

    def test_stack(self):
        """Test stacking folds onto N bins with a 1/L_N factor."""
        np.testing.assert_allclose(stack(np.arange(8), 4), [2, 3, 4, 5])

    def test_stack_rejects_non_divisor(self):
        """Test stacking needs N | L."""
        with self.assertRaises(BlockLengthError):
            stack(np.arange(8), 3)

    def test_repeat(self):
        """Test block repetition."""
        np.testing.assert_array_equal(repeat([1, 2], 3), [1, 2, 1, 2, 1, 2])

    def test_upsample_downsample(self):
        """Test zero insertion and decimation."""
        np.testing.assert_array_equal(upsample([1, 2], 3), [1, 0, 0, 2, 0, 0])
        np.testing.assert_array_equal(downsample([1, 0, 0, 2, 0, 0], 3), [1, 2])
        with self.assertRaises(BlockLengthError):
            downsample(np.arange(5), 2)

    def test_circular_convolve_shift(self):
        """Test convolving with a delayed impulse rotates the block."""
        out = circular_convolve([1, 2, 3], [0, 1, 0])
        np.testing.assert_allclose(out, [3, 1, 2], atol=1e-12)

    def test_circular_convolve_matches_direct(self):
        """Test the transform product against the modular sum."""
        x, h = self.random(24), self.random(24)
        np.testing.assert_allclose(
            circular_convolve(x, h), circular_convolve_direct(x, h), atol=1e-10
        )

    def test_circular_convolve_broadcasts(self):
        """Test one filter over stacked blocks."""
        x, h = self.random(5, 12), self.random(12)
        out = circular_convolve(x, h)
        for row in range(5):
            np.testing.assert_allclose(
                out[row], circular_convolve_direct(x[row], h), atol=1e-10
            )

    def test_circular_convolve_rejects_lengths(self):
        """Test unequal lengths are rejected."""
        with self.assertRaises(BlockLengthError):
            circular_convolve(np.ones(4), np.ones(5))

    def test_noble_identities_all_small_pairs(self):
        """Test repetition and stacking identities for every M <= N <= 64."""
        worst = 0.0
        for N in range(1, 65):
            for M in range(1, N + 1):
                g = derive_geometry(M, N)
                x = self.random(M)
                up = forward_dft(upsample(x, g.L_M)) - repeat(forward_dft(x), g.L_M)
                d = self.random(g.L)
                down = forward_dft(downsample(d, g.L_N)) - stack(forward_dft(d), g.N)
                worst = max(worst, np.abs(up).max(), np.abs(down).max())
        self.assertLess(worst, 1e-10)

    @parameterized.expand([["ortho"], ["forward"]])
    def test_override_normalization(self, norm):
        """Test the scaling switch applies and is restored."""
        x = np.ones(4)
        with override_normalization(norm):
            self.assertFalse(np.allclose(forward_dft(x), [4, 0, 0, 0]))
        np.testing.assert_allclose(forward_dft(x), [4, 0, 0, 0], atol=1e-12)
