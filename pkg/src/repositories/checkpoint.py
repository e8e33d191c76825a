"""Checkpoint directories.

Layout of one checkpoint::

    <name>/manifest.json       config, epochs completed, Adam step and hyperparameters,
                               parameter listing (sorted keys, no timestamps)
    <name>/params/<param>.mnt  float32 MNT1 tensors
    <name>/adam/m/<param>.mnt
    <name>/adam/v/<param>.mnt

A checkpoint directory is assembled under a temporary name and renamed into
place, so a reader never sees a half-written checkpoint.
"""

import json
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

import numpy as np
import pydantic
from numpy.typing import DTypeLike
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt

from src.core.interfaces import ICheckpointRepository
from src.exception import ConfigurationError, FileProcessingError, FormatError, ShapeError
from src.model import ModelConfig, ModelParams, build_network
from src.optim import AdamHyperParams, AdamState
from src.tensor import Tensor, read_tensor, write_tensor
from src.utils import get_logger

logger = get_logger(__name__)

MANIFEST_NAME = "manifest.json"
FORMAT_TAG = "moodnet-checkpoint"
FORMAT_VERSION = 1

PathLike = Union[str, Path]


@dataclass(frozen=True)
class Checkpoint:
    config: ModelConfig
    params: ModelParams
    adam_state: AdamState
    epochs_completed: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)  # e.g. the features section used to build inputs


class ParameterEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    shape: Tuple[int, ...]


class AdamEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    t: NonNegativeInt
    hyper: AdamHyperParams


class CheckpointManifest(BaseModel):
    """Contents of manifest.json."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    format: Literal["moodnet-checkpoint"] = FORMAT_TAG
    version: Literal[1] = FORMAT_VERSION
    config: ModelConfig
    epochs_completed: NonNegativeInt = 0
    adam: AdamEntry
    parameters: List[ParameterEntry]
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def of(cls, checkpoint: Checkpoint) -> "CheckpointManifest":
        return cls(
            config=checkpoint.config,
            epochs_completed=checkpoint.epochs_completed,
            adam=AdamEntry(t=checkpoint.adam_state.t, hyper=checkpoint.adam_state.hyper),
            parameters=[ParameterEntry(name=name, shape=tensor.shape) for name, tensor in checkpoint.params.items()],
            metadata=checkpoint.metadata,
        )

    @property
    def shapes(self) -> Dict[str, Tuple[int, ...]]:
        return {entry.name: entry.shape for entry in self.parameters}


def save_checkpoint(directory: PathLike, checkpoint: Checkpoint) -> Path:
    """Write `checkpoint` to `directory`, replacing any previous content."""
    directory = Path(directory)
    directory.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{directory.name}.", dir=directory.parent))
    try:
        for name, tensor in checkpoint.params.items():
            write_tensor(staging / "params" / f"{name}.mnt", tensor)
            write_tensor(staging / "adam" / "m" / f"{name}.mnt", checkpoint.adam_state.m[name])
            write_tensor(staging / "adam" / "v" / f"{name}.mnt", checkpoint.adam_state.v[name])
        text = json.dumps(CheckpointManifest.of(checkpoint).model_dump(mode="json"), sort_keys=True, indent=2)
        (staging / MANIFEST_NAME).write_text(text + "\n", encoding="utf-8")
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise

    # the old directory stays complete until the new one is in place
    previous = None
    if directory.exists():
        previous = Path(tempfile.mkdtemp(prefix=f".{directory.name}.old.", dir=directory.parent))
        directory.rename(previous / directory.name)
    staging.rename(directory)
    if previous is not None:
        shutil.rmtree(previous, ignore_errors=True)
    return directory


def _read_manifest(directory: Path) -> CheckpointManifest:
    path = directory / MANIFEST_NAME
    if not path.is_file():
        raise FileProcessingError(f"no checkpoint at {directory}", file_name=str(path))
    try:
        return CheckpointManifest.model_validate_json(path.read_text(encoding="utf-8"))
    except pydantic.ValidationError as exc:
        raise FormatError(f"invalid checkpoint manifest: {exc.errors()[0]['msg']}", file_name=str(path)) from exc


def _read_group(directory: Path, group: str, shapes: Mapping[str, tuple], dtype: DTypeLike) -> Dict[str, Tensor]:
    tensors = {}
    for name, shape in shapes.items():
        path = directory / group / f"{name}.mnt"
        if not path.is_file():
            raise FileProcessingError(f"missing tensor file for {name}", file_name=str(path))
        tensor = read_tensor(path, dtype=dtype)
        if tensor.shape != shape:
            raise ShapeError(
                f"{group}/{name}: file has shape {tensor.shape}, architecture needs {shape}",
                op="load_checkpoint",
                parameter=name,
            )
        tensors[name] = tensor
    return tensors


def check_architecture(config: ModelConfig, expected: ModelConfig, directory: PathLike) -> None:
    """Raise ConfigurationError naming every architecture field that differs."""
    differing = config.architecture_diff(expected)
    if differing:
        raise ConfigurationError(
            f"checkpoint was trained with a different model configuration ({', '.join(differing)} differ)",
            config_key="model",
            checkpoint=str(directory),
            fields=differing,
        )


def load_checkpoint(
    directory: PathLike,
    dtype: DTypeLike = np.float64,
    expected_config: Optional[ModelConfig] = None,
) -> Checkpoint:
    """Read a checkpoint; any disagreement between files, listing and architecture is fatal."""
    directory = Path(directory)
    manifest = _read_manifest(directory)
    config = manifest.config

    if expected_config is not None:
        check_architecture(config, expected_config, directory)

    shapes = build_network(config).parameter_shapes()
    listed = manifest.shapes
    if listed != shapes:
        diff = sorted(name for name in set(listed) | set(shapes) if listed.get(name) != shapes.get(name))
        raise ShapeError(
            f"checkpoint parameter listing disagrees with the architecture: {diff[:5]}",
            op="load_checkpoint",
        )

    params = ModelParams(_read_group(directory, "params", shapes, dtype))
    state = AdamState(
        hyper=manifest.adam.hyper,
        m=_read_group(directory, "adam/m", shapes, dtype),
        v=_read_group(directory, "adam/v", shapes, dtype),
        t=manifest.adam.t,
    )
    return Checkpoint(
        config=config,
        params=params,
        adam_state=state,
        epochs_completed=manifest.epochs_completed,
        metadata=dict(manifest.metadata),
    )


class CheckpointRepository(ICheckpointRepository):
    """Checkpoint series under one run directory: init/, epoch_NNNN/ and latest/."""

    INIT = "init"
    LATEST = "latest"

    def __init__(self, root: PathLike):
        self.root = Path(root)

    @staticmethod
    def epoch_name(epoch: int) -> str:
        return f"epoch_{epoch:04d}"

    def path(self, name: str) -> Path:
        return self.root / name

    def save(self, checkpoint: Checkpoint, name: str) -> Path:
        path = save_checkpoint(self.path(name), checkpoint)
        logger.info(
            "checkpoint_written",
            path=str(path),
            epochs_completed=checkpoint.epochs_completed,
            adam_step=checkpoint.adam_state.t,
        )
        return path

    def save_epoch(self, checkpoint: Checkpoint, epoch: int) -> Path:
        """Write epoch_NNNN/ and refresh latest/."""
        path = self.save(checkpoint, self.epoch_name(epoch))
        save_checkpoint(self.path(self.LATEST), checkpoint)
        return path

    def load(self, name: str = LATEST, dtype: DTypeLike = np.float64) -> Checkpoint:
        return load_checkpoint(self.path(name), dtype=dtype)

    def list(self) -> List[str]:
        if not self.root.is_dir():
            return []
        names = [p.name for p in self.root.iterdir() if (p / MANIFEST_NAME).is_file()]
        epochs = sorted(n for n in names if n.startswith("epoch_"))
        ordered = [self.INIT] if self.INIT in names else []
        ordered += epochs
        if self.LATEST in names:
            ordered.append(self.LATEST)
        return ordered


def resolve_checkpoint_dir(path: PathLike) -> Path:
    """Accept either a checkpoint directory or a run directory holding latest/."""
    path = Path(path)
    if (path / MANIFEST_NAME).is_file():
        return path
    if (path / CheckpointRepository.LATEST / MANIFEST_NAME).is_file():
        return path / CheckpointRepository.LATEST
    raise FileProcessingError(f"no checkpoint found at {path}", file_name=str(path))
