"""Feature cache directory.

Holds one MNT1 file per clip and modality, plus ``cache_index.json``, which maps
each cached file to the content hash of the inputs it was computed from.
An entry is fresh when its file exists and its recorded hash equals the hash
of the current inputs, so re-running featurization only rewrites what changed.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from src.core.interfaces import IFeatureCache
from src.core.models import Modality
from src.core.schemas import CLIP_ID_PATTERN
from src.exception import ValidationError
from src.features import LYRICS_SUFFIX, MEL_SUFFIX
from src.tensor import Tensor, atomic_write_bytes, write_tensor
from src.utils import get_logger

logger = get_logger(__name__)

INDEX_NAME = "cache_index.json"
FAILURES_NAME = "failures.json"

_SUFFIXES = {Modality.AUDIO.value: MEL_SUFFIX, Modality.LYRICS.value: LYRICS_SUFFIX}


def content_digest(*parts: Union[bytes, str]) -> str:
    """sha256 over length-prefixed parts, so part boundaries matter."""
    h = hashlib.sha256()
    for part in parts:
        data = part.encode("utf-8") if isinstance(part, str) else part
        h.update(len(data).to_bytes(8, "little"))
        h.update(data)
    return h.hexdigest()


def file_digest(path: Union[str, Path]) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def check_clip_id(clip_id: str) -> str:
    if not isinstance(clip_id, str) or not CLIP_ID_PATTERN.match(clip_id):
        raise ValidationError(f"clip_id {clip_id!r} is not a safe file name", field="clip_id")
    return clip_id


class FeatureCache(IFeatureCache):
    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self._index: Dict[str, Dict[str, str]] = self._read_index()
        self._dirty = False

    # ------------------------------------------------------------------
    # Paths
    # ------------------------------------------------------------------

    def file_name(self, clip_id: str, kind: str) -> str:
        return f"{check_clip_id(clip_id)}{_SUFFIXES[kind]}"

    def path(self, clip_id: str, kind: str) -> Path:
        return self.root / self.file_name(clip_id, kind)

    # ------------------------------------------------------------------
    # Index
    # ------------------------------------------------------------------

    def _read_index(self) -> Dict[str, Dict[str, str]]:
        path = self.root / INDEX_NAME
        if not path.is_file():
            return {}
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            logger.warning("cache_index_unreadable", path=str(path))
            return {}
        return data if isinstance(data, dict) else {}

    def is_fresh(self, clip_id: str, kind: str, digest: str) -> bool:
        return self._index.get(clip_id, {}).get(kind) == digest and self.path(clip_id, kind).is_file()

    def put(self, clip_id: str, kind: str, tensor: Tensor, digest: str) -> Path:
        path = self.path(clip_id, kind)
        write_tensor(path, tensor)
        self.mark(clip_id, kind, digest)
        return path

    def mark(self, clip_id: str, kind: str, digest: str) -> None:
        """Record a digest for a file written elsewhere (e.g. by a worker process)."""
        entry = self._index.setdefault(clip_id, {})
        if entry.get(kind) != digest:
            entry[kind] = digest
            self._dirty = True

    def flush(self) -> bool:
        """Persist the index if it changed; returns whether anything was written."""
        if not self._dirty:
            return False
        blob = json.dumps(self._index, sort_keys=True, indent=2) + "\n"
        atomic_write_bytes(self.root / INDEX_NAME, blob.encode("utf-8"))
        self._dirty = False
        return True

    # ------------------------------------------------------------------
    # Failures
    # ------------------------------------------------------------------

    def record_failures(self, failures: Dict[str, Dict[str, Any]]) -> Optional[Path]:
        path = self.root / FAILURES_NAME
        if not failures:
            path.unlink(missing_ok=True)
            return None
        blob = json.dumps(failures, sort_keys=True, indent=2) + "\n"
        atomic_write_bytes(path, blob.encode("utf-8"))
        return path
