"""Rate structure of a localised SC-FDMA link.

Every other module takes a ``SystemGeometry`` instead of recomputing
least common multiples. For M precoding bins and an N-point IFFT the model
runs at the common length L = lcm(M, N), with

    L = M * L_M = N * L_N,   gcd(L_M, L_N) = 1,   L_M | N,   L_N | M.
"""
import math
from dataclasses import dataclass

from scfdma.utils.errors import GeometryError


@dataclass(frozen=True)
class SystemGeometry:
    """Immutable rate integers of one user allocation."""

    M: int
    N: int
    L: int
    L_M: int
    L_N: int
    N_g: int
    N_t: int

    def __post_init__(self) -> None:
        """Check the divisibility relations."""
        if self.M < 1 or self.N < 1:
            raise GeometryError(f"sizes must be positive, got M={self.M}, N={self.N}")
        if self.M > self.N:
            raise GeometryError(f"M > N ({self.M} > {self.N})")
        if self.N_g < 0:
            raise GeometryError(f"cyclic prefix must be non-negative, got {self.N_g}")
        if not (self.L == self.M * self.L_M == self.N * self.L_N):
            raise GeometryError(
                f"L={self.L} is not M*L_M={self.M * self.L_M} "
                f"and N*L_N={self.N * self.L_N}"
            )
        if math.gcd(self.L_M, self.L_N) != 1:
            raise GeometryError(f"L_M={self.L_M} and L_N={self.L_N} are not co-prime")
        if self.N % self.L_M or self.M % self.L_N:
            raise GeometryError("L_M must divide N and L_N must divide M")
        if self.N_t != self.N + self.N_g:
            raise GeometryError(f"N_t={self.N_t} differs from N + N_g")

    @property
    def is_fractional(self) -> bool:
        """Whether N is not a multiple of M."""
        return self.N % self.M != 0

    @property
    def sample_rate_ratio(self) -> float:
        """Rate of the transmitted samples in units of the symbol rate (N/M)."""
        return self.N / self.M


def derive_geometry(M: int, N: int, N_g: int = 0) -> SystemGeometry:
    """Derive the rate integers for M user bins, an N-point IFFT and an N_g CP.

    Args:
        M: Number of user subcarriers (precoding DFT size).
        N: IFFT size.
        N_g: Cyclic prefix length in samples.

    Returns:
        SystemGeometry: The validated geometry.
    """
    for name, value in (("M", M), ("N", N), ("N_g", N_g)):
        if isinstance(value, bool) or int(value) != value:
            raise GeometryError(f"{name} must be an integer, got {value!r}")
    M, N, N_g = int(M), int(N), int(N_g)
    if M < 1 or N < 1:
        raise GeometryError(f"sizes must be positive, got M={M}, N={N}")
    if M > N:
        raise GeometryError(f"M > N ({M} > {N})")

    L = M * N // math.gcd(M, N)
    return SystemGeometry(
        M=M, N=N, L=L, L_M=L // M, L_N=L // N, N_g=N_g, N_t=N + N_g
    )


def nyquist_check(g: SystemGeometry, alpha: float = 0.0) -> bool:
    """Return True when N >= 2(1 + alpha)M, the sampling condition at the receiver."""
    return g.N >= 2.0 * (1.0 + alpha) * g.M


@dataclass(frozen=True)
class LteNumerology:
    """LTE uplink numbers used to quantize tap delays."""

    bandwidth_mhz: float = 5.0
    subframe_ms: float = 0.5
    long_block_us: float = 66.67
    N: int = 512
    cp_samples: int = 31

    @property
    def sample_duration_ns(self) -> float:
        """Duration of one sample of the N-point IFFT, in nanoseconds."""
        return self.long_block_us * 1e3 / self.N
