"""Init the SC-FDMA model."""
from .__version__ import __version__
from .campaigns import run_psd, run_sinr, run_validate, run_window

__all__ = [
    "__version__", "run_psd", "run_sinr", "run_validate", "run_window"
]
