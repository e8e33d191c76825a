"""Feature manifests and example loading.

A feature manifest is JSON lines: a header object ``{"lines_max": L, "words_max": W}``,
optionally carrying the provenance of the word vectors under ``"embeddings"``,
followed by one record per clip::

    {"clip_id": "c001", "audio_feat": "c001.mel.mnt", "lyrics_feat": "c001.lyr.mnt",
     "label": "III", "split": "train"}

Feature paths are relative to the manifest's directory unless absolute.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pydantic
from numpy.typing import DTypeLike

from src.core.models import Modality, Split
from src.core.schemas import EmbeddingsProvenance, ManifestHeader, ManifestRecord, parse_record
from src.exception import ConfigurationError, FormatError, ValidationError
from src.model import ModelConfig
from src.tensor import Tensor, atomic_write_bytes, read_tensor
from src.utils import get_logger

logger = get_logger(__name__)

_FEATURE_KEYS = {Modality.AUDIO: "audio_feat", Modality.LYRICS: "lyrics_feat"}


@dataclass(frozen=True)
class DatasetManifest:
    records: Tuple[ManifestRecord, ...]
    lines_max: int
    words_max: int
    root: Path = Path(".")
    embeddings: Optional[EmbeddingsProvenance] = None

    def __post_init__(self):
        seen = set()
        for record in self.records:
            if record.clip_id in seen:
                raise ValidationError(f"duplicate clip_id {record.clip_id!r}", field="clip_id")
            seen.add(record.clip_id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[ManifestRecord]:
        return iter(self.records)

    @property
    def grid(self) -> Tuple[int, int]:
        return self.lines_max, self.words_max

    @property
    def labels(self) -> List[int]:
        return [r.label.index for r in self.records]

    def resolve(self, name: str) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.root / path

    def subset(self, split: Optional[Split]) -> "DatasetManifest":
        if split is None:
            return self
        return DatasetManifest(
            records=tuple(r for r in self.records if r.split is split),
            lines_max=self.lines_max,
            words_max=self.words_max,
            root=self.root,
            embeddings=self.embeddings,
        )

    def check_files(self, modalities: Sequence[Modality]) -> None:
        """Every record must reference an existing feature file for each modality."""
        missing = []
        for record in self.records:
            for modality in modalities:
                name = record.feature(modality)
                if name is None or not self.resolve(name).is_file():
                    missing.append(f"{record.clip_id}:{modality.value}")
        if missing:
            raise ValidationError(
                f"{len(missing)} feature files are missing, first: {missing[:3]}",
                field=_FEATURE_KEYS[modalities[0]] if len(modalities) == 1 else "features",
                missing=missing[:20],
            )

    @classmethod
    def load(
        cls,
        path: Union[str, Path],
        modalities: Optional[Sequence[Modality]] = None,
    ) -> "DatasetManifest":
        """Parse a manifest; with `modalities`, also require the matching feature files."""
        path = Path(path)
        try:
            lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
        except OSError as exc:
            raise ValidationError(f"cannot read manifest {path}: {exc}", field="manifest") from exc
        if not lines:
            raise FormatError("empty manifest", file_name=str(path))

        try:
            rows = [json.loads(line) for line in lines]
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON line: {exc}", file_name=str(path)) from exc

        try:
            header = ManifestHeader.model_validate(rows[0])
        except pydantic.ValidationError as exc:
            raise FormatError("first line must be the {lines_max, words_max} header", file_name=str(path)) from exc

        records = tuple(parse_record(ManifestRecord, row, n, str(path)) for n, row in enumerate(rows[1:], start=2))
        manifest = cls(
            records=records,
            lines_max=header.lines_max,
            words_max=header.words_max,
            root=path.parent,
            embeddings=header.embeddings,
        )
        if modalities:
            manifest.check_files(modalities)
        return manifest

    def dumps(self) -> str:
        header = ManifestHeader(lines_max=self.lines_max, words_max=self.words_max, embeddings=self.embeddings)
        lines = [json.dumps(header.model_dump(mode="json", exclude_none=True), sort_keys=True)]
        lines += [json.dumps(r.to_dict(), sort_keys=True) for r in self.records]
        return "\n".join(lines) + "\n"

    def write(self, path: Union[str, Path]) -> bool:
        """Write the manifest unless the file already holds identical content."""
        path = Path(path)
        text = self.dumps()
        if path.is_file() and path.read_text(encoding="utf-8") == text:
            return False
        atomic_write_bytes(path, text.encode("utf-8"))
        return True


# ----------------------------------------------------------------------
# Examples
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Example:
    clip_id: str
    label: int
    audio: Optional[Tensor] = None
    lyrics: Optional[Tensor] = None


def check_compatible(config: ModelConfig, manifest: DatasetManifest) -> None:
    if config.uses(Modality.LYRICS) and config.text_grid != manifest.grid:
        raise ConfigurationError(
            f"model text grid {config.text_grid} does not match the manifest grid {manifest.grid}",
            config_key="model.lines_max",
        )


def load_examples(
    manifest: DatasetManifest,
    config: ModelConfig,
    dtype: DTypeLike = np.float64,
) -> List[Example]:
    """Read every record's features for the model's modalities, checking shapes against the config."""
    check_compatible(config, manifest)
    manifest.check_files(config.modalities)
    expected = {Modality.AUDIO: config.audio_input_shape, Modality.LYRICS: config.lyrics_input_shape}

    examples = []
    for record in manifest:
        features: Dict[Modality, Tensor] = {}
        for modality in config.modalities:
            tensor = read_tensor(manifest.resolve(record.feature(modality)), dtype=dtype)
            if tensor.shape != expected[modality]:
                raise ConfigurationError(
                    f"{record.clip_id}: {modality.value} features have shape {tensor.shape}, "
                    f"model expects {expected[modality]}",
                    config_key="features",
                )
            features[modality] = tensor
        examples.append(
            Example(
                clip_id=record.clip_id,
                label=record.label.index,
                audio=features.get(Modality.AUDIO),
                lyrics=features.get(Modality.LYRICS),
            )
        )
    logger.debug("examples_loaded", count=len(examples), modalities=[m.value for m in config.modalities])
    return examples
