from dataclasses import dataclass

import numpy as np
from datasets.fingerprint import Hasher

from ..utils.errors import ParameterError
from .clahe import ClaheConfig, clahe

CHANNEL_CLIP_LIMITS = (0.01, 0.02)


@dataclass(frozen=True)
class ThreeChannelImage:
    """Normalized plane plus its two CLAHE renditions, in (R, G, B) order."""

    channels: tuple

    def __post_init__(self):
        channels = tuple(self.channels)
        if len(channels) != 3:
            raise ParameterError(f"Expected 3 channels, got {len(channels)}.")
        if len({c.shape for c in channels}) != 1:
            raise ParameterError("Channels must share one shape.")
        for c in channels:
            if c.pixels.min() < 0.0 or c.pixels.max() > 1.0:
                raise ParameterError("Channel values must lie in [0, 1].")
        object.__setattr__(self, "channels", channels)

    @property
    def width(self):
        return self.channels[0].width

    @property
    def height(self):
        return self.channels[0].height

    @property
    def shape(self):
        return self.channels[0].shape

    def planes(self):
        return [c.pixels for c in self.channels]

    def as_array(self):
        return np.stack(self.planes(), axis=-1)


class SynthesizeChannels:
    CONFIG_HASH = Hasher.hash(["norm", "clahe", "clahe", list(CHANNEL_CLIP_LIMITS)])

    def __init__(self, cfg=None, clip_limits=CHANNEL_CLIP_LIMITS, enhance=True):
        self.cfg = cfg or ClaheConfig()
        self.clip_limits = tuple(clip_limits)
        self.enhance = enhance

    def __call__(self, norm):
        return synthesize_channels(norm, self.cfg, self.clip_limits, self.enhance)


def synthesize_channels(norm, cfg=None, clip_limits=CHANNEL_CLIP_LIMITS, enhance=True):
    """
    Stack ``norm`` with two CLAHE passes at increasing clip limits.

    With ``enhance=False`` all three channels carry the normalized plane, which
    is how the enhancement stage is ablated.
    """
    if not enhance:
        return ThreeChannelImage((norm, norm, norm))
    cfg = cfg or ClaheConfig()
    enhanced = [clahe(norm, cfg.model_copy(update={"clip_limit": limit})) for limit in clip_limits]
    return ThreeChannelImage((norm, *enhanced))
