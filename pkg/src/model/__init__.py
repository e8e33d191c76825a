from .config import ModelConfig, DEPTHS, DEFAULT_CHANNELS, DEFAULT_HEAD_WIDTHS, TOWER_WIDTH
from .towers import AUDIO_POOLS, TEXT_POOLS, ConvBlock, Tower, build_audio_tower, build_text_tower
from .head import DenseBlock, FusionHead, build_fusion_head
from .network import (
    ForwardCache,
    ForwardResult,
    ModelParams,
    MoodNet,
    backward,
    build_network,
    forward,
)

__all__ = [
    "ModelConfig",
    "DEPTHS",
    "DEFAULT_CHANNELS",
    "DEFAULT_HEAD_WIDTHS",
    "TOWER_WIDTH",
    "AUDIO_POOLS",
    "TEXT_POOLS",
    "ConvBlock",
    "Tower",
    "build_audio_tower",
    "build_text_tower",
    "DenseBlock",
    "FusionHead",
    "build_fusion_head",
    "ForwardCache",
    "ForwardResult",
    "ModelParams",
    "MoodNet",
    "backward",
    "build_network",
    "forward",
]
