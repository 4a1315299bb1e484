"""Synthetic scenarios shared by several test modules."""

from measaudit.modeling import RealizationSpec, train_realization
from measaudit.rng import RngStream
from measaudit.split import SplitSpec, temporal_split
from measaudit.synth import ChannelSpec, SynthSpec, generate_synthetic

# U channels gain 50% after the shift, S channels lose 50%: both models err by
# the same magnitude in opposite directions.
OPPOSITE_SHIFT = (
    ChannelSpec("U1", 1.0, 1.5, 2.0, 0.2),
    ChannelSpec("U2", 0.8, 1.2, -1.0, 0.2),
    ChannelSpec("S1", 1.0, 0.5, 0.5, 0.2),
    ChannelSpec("S2", 1.2, 0.6, 3.0, 0.2),
)
NO_SHIFT = (
    ChannelSpec("U1", 1.0, 1.0, 2.0, 0.5),
    ChannelSpec("U2", 0.8, 0.8, -1.0, 0.5),
    ChannelSpec("S1", 1.0, 1.0, 0.5, 0.5),
    ChannelSpec("S2", 1.2, 1.2, 3.0, 0.5),
)
HALVED = (
    ChannelSpec("U1", 1.0, 1.0, 2.0, 0.3),
    ChannelSpec("S1", 1.0, 0.5, 0.5, 0.3),
)


def audit_inputs(channels, n=5000, seed=0, target_noise=0.3):
    spec = SynthSpec(n, channels, shift_row=int(0.7 * n), target_noise_std=target_noise)
    ds = generate_synthetic(spec, RngStream(seed, ("synth",)))
    split = temporal_split(ds, SplitSpec(0.6, 0.2))
    names = [c.name for c in channels]
    realizations = [
        train_realization(split, RealizationSpec(prefix, tuple(n_ for n_ in names if n_.startswith(prefix)), "T"))
        for prefix in ("S", "U")
    ]
    return split, realizations
