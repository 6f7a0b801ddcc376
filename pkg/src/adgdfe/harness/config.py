"""Experiment configuration and its flat YAML file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import yaml

from ..channel import DiscreteChannel, discretize, sparse_channel
from ..dfe import DfeConfig

VARIANTS = ("plain", "adg", "adg_td")


@dataclass(frozen=True)
class ExperimentConfig:
    """One end-to-end identification + equalization run.

    ``training_length`` counts samples at the fractional rate (``M`` per
    symbol); ``data_length`` counts symbols. When ``channel_tau`` is set the
    channel is the sampled cosine-squared pulse instead of the sparse one.
    """

    variant: str = "adg_td"
    channel_positions: tuple = (1, 4)
    channel_gains: tuple = (1.0, 0.5)
    channel_length: int = 7
    channel_tau: Optional[float] = None
    channel_span: Optional[float] = None
    noise_variance: float = 0.1
    step_size: float = 0.005
    training_length: int = 4000
    data_length: int = 10_000
    oversampling: int = 2
    n1: int = 4
    n2: int = 2
    n3: int = 4
    threshold_const: float = 2.0
    cadence: int = 50
    hold: int = 3
    skip: Optional[int] = None
    smoothing: int = 100
    tail_fraction: float = 0.1
    snapshot_stride: int = 10
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "channel_positions", tuple(int(p) for p in self.channel_positions))
        object.__setattr__(self, "channel_gains", tuple(float(g) for g in self.channel_gains))
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        for name in ("channel_length", "training_length", "data_length", "oversampling",
                     "cadence", "smoothing", "snapshot_stride"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.noise_variance < 0:
            raise ValueError("noise_variance must be >= 0")
        if self.step_size < 0:
            raise ValueError("step_size must be >= 0")
        if self.training_length % self.oversampling:
            raise ValueError("training_length must be a multiple of the oversampling factor")
        if not 0 < self.tail_fraction <= 1:
            raise ValueError("tail_fraction must be in (0, 1]")
        if self.skip is not None and not 0 <= self.skip < self.data_length:
            raise ValueError("skip must lie in [0, data_length)")

    @property
    def dfe(self) -> DfeConfig:
        return DfeConfig(self.n1, self.n2, self.n3, self.oversampling)

    @property
    def skip_symbols(self) -> int:
        return self.n3 if self.skip is None else self.skip

    def channel(self) -> DiscreteChannel:
        spacing = 1.0 / self.oversampling
        if self.channel_tau is not None:
            span = self.channel_span if self.channel_span is not None else self.channel_tau
            return discretize(self.channel_tau, spacing, span)
        return sparse_channel(self.channel_positions, self.channel_gains,
                              self.channel_length, spacing)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["channel_positions"] = list(self.channel_positions)
        d["channel_gains"] = list(self.channel_gains)
        return d


FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}


def coerce(key: str, value):
    """Convert a CLI or file value to the type of config field ``key``."""
    if key not in FIELDS:
        raise KeyError(f"unknown config key {key!r}")
    if isinstance(value, str):
        value = yaml.safe_load(value)
    if key in ("channel_positions", "channel_gains"):
        if isinstance(value, (int, float)):
            value = [value]
        return tuple(value)
    default = FIELDS[key].default
    if value is None or key == "variant":
        return value
    if isinstance(default, bool):
        return bool(value)
    if isinstance(default, int) or key == "skip":
        if isinstance(value, float) and not value.is_integer():
            raise ValueError(f"{key} must be an integer, got {value}")
        return int(value)
    if isinstance(default, float) or key in ("channel_tau", "channel_span"):
        return float(value)
    return value


def load_config(path=None, **overrides) -> ExperimentConfig:
    """Read a flat ``key: value`` YAML file; ``overrides`` win over the file."""
    values = {}
    if path is not None:
        path = Path(path)
        try:
            raw = yaml.safe_load(path.read_text()) or {}
        except OSError as exc:
            raise OSError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: expected a mapping of config keys")
        values.update({k: coerce(k, v) for k, v in raw.items()})
    values.update({k: coerce(k, v) for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def dump_config(cfg: ExperimentConfig, path) -> None:
    Path(path).write_text(yaml.safe_dump(cfg.to_dict(), sort_keys=False))
