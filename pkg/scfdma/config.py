"""Experiment configuration: defaults, presets, YAML files and CLI overrides."""
import dataclasses
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import yaml

from scfdma.channel import (
    TapProfile,
    flat_profile,
    load_profile,
    pedestrian_a_profile,
)
from scfdma.equalize import EqualizerKind
from scfdma.geometry import LteNumerology, SystemGeometry, derive_geometry
from scfdma.shaping import ShapingConfig, SpectralWindow, WindowKind, build_window
from scfdma.sinr import sinr_grid
from scfdma.txchain import SYMBOL_SOURCES
from scfdma.utils.errors import ConfigError, ScfdmaError
from scfdma.utils.rng_utils import default_workers

PRESETS_FILE = os.path.join(os.path.dirname(__file__), "presets.yaml")

CHANNELS = {
    "pedestrian-a": pedestrian_a_profile,
    "flat": flat_profile,
}

EQUALIZERS = {
    "zf": (EqualizerKind.ZF,),
    "mmse": (EqualizerKind.MMSE,),
    "both": (EqualizerKind.ZF, EqualizerKind.MMSE),
}


@dataclass
class ExperimentConfig:
    """One experiment, fully determined together with its seed."""

    preset: Optional[str] = None
    M: int = 10
    N: int = 512
    N_g: int = 31
    shaping: str = "rect"
    rolloff: float = 0.0
    block: Optional[int] = None
    channel: str = "pedestrian-a"
    profile: Optional[str] = None
    normalize: bool = True
    equalizer: str = "both"
    esn0: Tuple[float, float, float] = (0.0, 5.0, 30.0)
    realizations: int = 2000
    frames: int = 10
    psd_frames: int = 4000
    seed: int = 0
    segment_len: Optional[int] = None
    overlap: float = 0.5
    welch_window: str = "boxcar"
    constellation: str = "qpsk"
    sigma_x2: float = 1.0
    workers: int = field(default_factory=default_workers)
    numerology: Dict[str, Any] = field(default_factory=dict)

    def geometry(self) -> SystemGeometry:
        """Derived rate integers."""
        return derive_geometry(self.M, self.N, self.N_g)

    def shaping_config(self) -> ShapingConfig:
        """Window family, roll-off and user block."""
        return ShapingConfig(
            kind=WindowKind(self.shaping),
            alpha=self.rolloff,
            user_block_index=self.block,
        )

    def window(self) -> SpectralWindow:
        """The transmit window."""
        return build_window(self.geometry(), self.shaping_config())

    def lte_numerology(self) -> LteNumerology:
        """LTE numbers of the preset, defaults otherwise."""
        return LteNumerology(**self.numerology)

    def tap_profile(self) -> TapProfile:
        """Built-in or file-based power delay profile."""
        if self.profile:
            return load_profile(self.profile, self.lte_numerology().sample_duration_ns)
        return CHANNELS[self.channel]()

    def equalizer_kinds(self) -> Tuple[EqualizerKind, ...]:
        """Equalizers to evaluate."""
        return EQUALIZERS[self.equalizer]

    def es_n0_grid(self) -> Tuple[float, ...]:
        """Es/N0 grid in dB."""
        return sinr_grid(*self.esn0)

    def segment_length(self) -> int:
        """Welch segment length, 4 N_t by default."""
        if self.segment_len is not None:
            return self.segment_len
        return 4 * (self.N + self.N_g)

    def validate(self) -> "ExperimentConfig":
        """Check every constraint before computing anything.

        Returns:
            ExperimentConfig: self, for chaining.

        Raises:
            ConfigError: Naming the violated constraint.
        """
        if self.shaping not in {kind.value for kind in WindowKind} - {"custom"}:
            raise ConfigError(f"unknown shaping {self.shaping!r} (rect or rrc)")
        if self.channel not in CHANNELS:
            raise ConfigError(f"unknown channel {self.channel!r}")
        if self.equalizer not in EQUALIZERS:
            raise ConfigError(f"unknown equalizer {self.equalizer!r}")
        if self.constellation not in SYMBOL_SOURCES:
            raise ConfigError(f"unknown constellation {self.constellation!r}")
        if self.profile and not os.path.exists(self.profile):
            raise ConfigError(f"profile file {self.profile} does not exist")
        for name in ("realizations", "frames", "psd_frames", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.sigma_x2 <= 0:
            raise ConfigError(f"sigma_x2 must be positive, got {self.sigma_x2}")
        if not 0.0 <= self.overlap < 1.0:
            raise ConfigError(f"overlap must lie in [0, 1), got {self.overlap}")
        try:
            g = self.geometry()
            self.window()
            profile = self.tap_profile()
            self.es_n0_grid()
        except (ScfdmaError, ValueError, TypeError) as e:
            raise ConfigError(str(e)) from e
        if profile.max_delay > g.N_g:
            raise ConfigError(
                f"tap delay {profile.max_delay} exceeds cyclic prefix {g.N_g}"
            )
        segment = self.segment_length()
        if segment < 2:
            raise ConfigError(f"segment length must be at least 2, got {segment}")
        if self.psd_frames * g.N_t < 2 * segment:
            raise ConfigError(
                f"{self.psd_frames} frames of {g.N_t} samples are fewer than two "
                f"Welch segments of {segment}"
            )
        return self

    def metadata(self) -> List[Tuple[str, Any]]:
        """(key, value) pairs echoed into result headers."""
        items = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name in ("workers", "numerology"):
                continue
            if isinstance(value, tuple):
                value = ":".join(f"{v:g}" for v in value)
            items.append((f.name, "" if value is None else value))
        return items


def parse_load_config(yaml_file: str) -> Dict:
    """Parse an experiment YAML.

    Args:
        yaml_file: A string pointing to the YAML file.

    Returns:
        Dict: The config as a dictionary.
    """
    try:
        with open(yaml_file) as yml:
            config = yaml.load(yml, Loader=yaml.FullLoader)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read {yaml_file}: {e}") from e
    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigError(f"{yaml_file} must hold a mapping")
    return config


def load_presets(yaml_file: str = PRESETS_FILE) -> Dict[str, Dict]:
    """Read the named presets."""
    return parse_load_config(yaml_file)


def parse_esn0(text: str) -> Tuple[float, float, float]:
    """Parse ``start:step:stop`` in dB."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"Es/N0 grid must read start:step:stop, got {text!r}")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"Es/N0 grid must be numeric, got {text!r}")
    return start, step, stop


def _apply(config: ExperimentConfig, values: Dict[str, Any], origin: str) -> None:
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    for key, value in values.items():
        if key not in known:
            raise ConfigError(f"unknown key {key!r} in {origin}")
        if key == "esn0" and not isinstance(value, tuple):
            value = parse_esn0(value) if isinstance(value, str) else tuple(value)
        setattr(config, key, value)


def build_config(
    preset: Optional[str] = None,
    yaml_file: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    """Layer defaults, a preset, a YAML file and explicit overrides.

    Args:
        preset: Name of a packaged preset (``lte5``, ``toy``).
        yaml_file: Optional experiment YAML.
        overrides: Values given on the command line; None entries are skipped.

    Returns:
        ExperimentConfig: The validated configuration.
    """
    config = ExperimentConfig()
    file_values = parse_load_config(yaml_file) if yaml_file else {}
    preset = preset or file_values.get("preset")
    if preset:
        presets = load_presets()
        if preset not in presets:
            raise ConfigError(f"unknown preset {preset!r} ({', '.join(presets)})")
        logging.info(f"Using preset {preset}")
        _apply(config, presets[preset], f"preset {preset}")
        config.preset = preset
    if file_values:
        _apply(config, file_values, yaml_file or "")
    if preset:
        config.preset = preset
    given = {k: v for k, v in (overrides or {}).items() if v is not None}
    _apply(config, given, "options")
    return config.validate()
