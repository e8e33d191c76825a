from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict

from src.exception import ConfigurationError

_PATH_FIELDS = ("embeddings", "raw_manifest", "manifest", "cache_dir", "checkpoint_dir")


class PathsSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    embeddings: Optional[Path] = None
    raw_manifest: Optional[Path] = None
    manifest: Optional[Path] = None
    cache_dir: Optional[Path] = None
    checkpoint_dir: Optional[Path] = None

    def resolved(self, base_dir: Path) -> "PathsSection":
        """Relative paths become relative to `base_dir`."""
        updates = {}
        for name in _PATH_FIELDS:
            value = getattr(self, name)
            if value is not None and not value.is_absolute():
                updates[name] = (base_dir / value).resolve()
        return self.model_copy(update=updates)

    def feature_manifest(self) -> Path:
        """Explicit manifest path, else manifest.jsonl inside the cache directory."""
        if self.manifest is not None:
            return self.manifest
        return self.require("cache_dir") / "manifest.jsonl"

    def require(self, name: str) -> Path:
        value = getattr(self, name)
        if value is None:
            raise ConfigurationError(f"paths.{name} is not set", config_key=f"paths.{name}")
        return value
