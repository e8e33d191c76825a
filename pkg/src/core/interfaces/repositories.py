"""Repository interfaces for the artifact storage layer.

Services depend on these interfaces rather than on directory layouts,
which keeps the training and featurization services testable against
temporary directories.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from numpy.typing import DTypeLike

from src.tensor import Tensor


class ICheckpointRepository(ABC):
    """Checkpoint series repository interface."""

    @abstractmethod
    def save(self, checkpoint: Any, name: str) -> Path:
        """Persist a checkpoint under a name.

        Args:
            checkpoint: Checkpoint to write
            name: Entry name such as "init", "epoch_0003" or "latest"

        Returns:
            Directory the checkpoint was written to
        """
        pass

    @abstractmethod
    def load(self, name: str, dtype: DTypeLike = np.float64) -> Any:
        """Load a named checkpoint.

        Args:
            name: Entry name
            dtype: Parameter dtype after loading

        Returns:
            The checkpoint
        """
        pass

    @abstractmethod
    def list(self) -> List[str]:
        """List checkpoint names in write order.

        Returns:
            Checkpoint names
        """
        pass


class IFeatureCache(ABC):
    """Feature cache repository interface."""

    @abstractmethod
    def is_fresh(self, clip_id: str, kind: str, digest: str) -> bool:
        """Check whether a cached feature matches its source digest.

        Args:
            clip_id: Clip identifier
            kind: "audio" or "lyrics"
            digest: Content hash of the sources and feature settings

        Returns:
            True if the cached file exists and was built from the same inputs
        """
        pass

    @abstractmethod
    def put(self, clip_id: str, kind: str, tensor: Tensor, digest: str) -> Path:
        """Write a feature tensor and record its digest.

        Args:
            clip_id: Clip identifier
            kind: "audio" or "lyrics"
            tensor: Feature tensor
            digest: Content hash of the inputs

        Returns:
            Path of the written file
        """
        pass

    @abstractmethod
    def record_failures(self, failures: Dict[str, Dict[str, Any]]) -> Optional[Path]:
        """Write (or clear) the per-record failure report.

        Args:
            failures: Mapping of clip ID to error description

        Returns:
            Path of the report, or None when there were no failures
        """
        pass
