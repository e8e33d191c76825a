from .checkpoint import (
    Checkpoint,
    CheckpointRepository,
    check_architecture,
    load_checkpoint,
    resolve_checkpoint_dir,
    save_checkpoint,
)
from .feature_cache import FeatureCache, check_clip_id, content_digest, file_digest

__all__ = [
    "Checkpoint",
    "CheckpointRepository",
    "check_architecture",
    "load_checkpoint",
    "resolve_checkpoint_dir",
    "save_checkpoint",
    "FeatureCache",
    "check_clip_id",
    "content_digest",
    "file_digest",
]
