"""Synthetic sensor data with a known latent quantity.

The latent is a sinusoid plus an AR(1) wander.  Each channel reads
``loading * latent + bias + noise``; its loading switches from
``loading_train`` to ``loading_shift`` at ``shift_row``, which lets tests
plant a context change whose effect on each realization is known.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidSpec
from .ingest import Dataset
from .rng import RngStream

LATENT_COLUMN = "latent"


@dataclass(frozen=True)
class ChannelSpec:
    name: str
    loading_train: float = 1.0
    loading_shift: float = 1.0
    bias: float = 0.0
    noise_std: float = 0.0


@dataclass(frozen=True)
class SynthSpec:
    n_rows: int
    channels: tuple[ChannelSpec, ...]
    shift_row: int
    amplitude: float = 10.0
    period: float = 24.0
    ar_coef: float = 0.9
    ar_noise_std: float = 1.0
    target_noise_std: float = 0.0
    target_name: str = "T"

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if not 0 < self.shift_row < self.n_rows:
            raise InvalidSpec(f"shift_row must satisfy 0 < shift_row < n_rows, got {self.shift_row}")
        names = [c.name for c in self.channels]
        if not names:
            raise InvalidSpec("at least one channel required")
        if len(set(names)) != len(names) or self.target_name in names or LATENT_COLUMN in names:
            raise InvalidSpec(f"channel names must be distinct and not reserved: {names}")
        stds = [c.noise_std for c in self.channels] + [self.ar_noise_std, self.target_noise_std]
        if any(s < 0 for s in stds):
            raise InvalidSpec("noise standard deviations must be >= 0")
        if self.period <= 0:
            raise InvalidSpec("period must be positive")
        if not -1.0 < self.ar_coef < 1.0:
            raise InvalidSpec("ar_coef must lie in (-1, 1)")

    @classmethod
    def from_dict(cls, d: dict) -> "SynthSpec":
        d = dict(d)
        try:
            d["channels"] = tuple(ChannelSpec(**c) for c in d["channels"])
            return cls(**d)
        except (KeyError, TypeError) as exc:
            raise InvalidSpec(f"malformed synth spec: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "SynthSpec":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return asdict(self) | {"channels": [asdict(c) for c in self.channels]}


def latent_series(spec: SynthSpec, rng: RngStream) -> np.ndarray:
    t = np.arange(spec.n_rows)
    innovations = rng.child("latent").normal(0.0, 1.0, spec.n_rows) * spec.ar_noise_std
    ar = np.empty(spec.n_rows)
    prev = 0.0
    for i, e in enumerate(innovations):
        prev = spec.ar_coef * prev + e
        ar[i] = prev
    return spec.amplitude * np.sin(2.0 * math.pi * t / spec.period) + ar


def generate_synthetic(spec: SynthSpec, rng: RngStream | None = None) -> Dataset:
    """Channel columns, then the target, then the noise-free latent."""
    rng = rng if rng is not None else RngStream(0)
    z = latent_series(spec, rng)
    shifted = np.arange(spec.n_rows) >= spec.shift_row
    columns = []
    for ch in spec.channels:
        loading = np.where(shifted, ch.loading_shift, ch.loading_train)
        noise = rng.child("channel", ch.name).normal(0.0, 1.0, spec.n_rows) * ch.noise_std
        columns.append(loading * z + ch.bias + noise)
    target = z + rng.child("target").normal(0.0, 1.0, spec.n_rows) * spec.target_noise_std
    names = [c.name for c in spec.channels] + [spec.target_name, LATENT_COLUMN]
    return Dataset(names, np.column_stack(columns + [target, z]),
                   {"t": [str(i) for i in range(spec.n_rows)]})
