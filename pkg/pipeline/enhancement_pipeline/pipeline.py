from pathlib import Path

from datasets.fingerprint import Hasher
from loguru import logger

from ..core.io import read_float_png, write_float_png, write_rgb_png
from .clahe import Clahe, ClaheConfig
from .synthesize_channels import CHANNEL_CLIP_LIMITS, SynthesizeChannels


class EnhancementPipeline:
    def __init__(self, cfg=None, clip_limits=CHANNEL_CLIP_LIMITS, enhance=True):
        self.synthesize = SynthesizeChannels(cfg or ClaheConfig(), clip_limits, enhance)

    def run(self, norm):
        return self.synthesize(norm)

    @property
    def version(self):
        return Hasher.hash(
            [
                Clahe.CONFIG_HASH,
                SynthesizeChannels.CONFIG_HASH,
                self.synthesize.cfg.model_dump(),
                list(self.synthesize.clip_limits),
                self.synthesize.enhance,
            ]
        )


def enhance_command(args, config):
    norm = read_float_png(args.input)
    rgb = EnhancementPipeline(config.clahe).run(norm)
    out = write_rgb_png(args.output, rgb.planes())
    logger.info(f"Wrote three-channel image {out} ({rgb.width}x{rgb.height}).")
    if args.split:
        out = Path(out)
        for k, channel in enumerate(rgb.channels):
            write_float_png(out.with_name(f"{out.stem}_ch{k}.png"), channel)
        logger.info(f"Wrote per-channel planes next to {out.name}.")
    return 0
