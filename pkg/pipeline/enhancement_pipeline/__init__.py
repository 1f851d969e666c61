from .clahe import ClaheConfig, clahe
from .pipeline import EnhancementPipeline
from .synthesize_channels import ThreeChannelImage, synthesize_channels

__all__ = ["ClaheConfig", "EnhancementPipeline", "ThreeChannelImage", "clahe", "synthesize_channels"]
