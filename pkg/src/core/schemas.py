"""Wire records of the JSON-lines manifests.

Raw manifest rows describe assets on disk, feature manifest rows point at
cached tensors. Both are validated here; callers get project exceptions,
never ``pydantic.ValidationError``.
"""

import re
from pathlib import Path
from typing import Annotated, Any, Optional, Type, TypeVar

import pydantic
from pydantic import AfterValidator, BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator

from src.exception import FormatError, ValidationError

from .models import Modality, MoodCluster, Split

CLIP_ID_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

M = TypeVar("M", bound=BaseModel)


def parse_record(model: Type[M], raw: Any, line_no: int, source: str) -> M:
    """Validate one decoded JSON line against `model`.

    A row that is not an object is a FormatError; a bad or missing field is a
    ValidationError naming the field.
    """
    try:
        return model.model_validate(raw)
    except pydantic.ValidationError as exc:
        error = exc.errors()[0]
        if error["type"] == "model_type":
            raise FormatError(f"line {line_no}: expected a JSON object", file_name=source) from None
        field = ".".join(str(part) for part in error["loc"]) or None
        clip_id = raw.get("clip_id") if isinstance(raw, dict) else None
        raise ValidationError(
            f"line {line_no}: {field or 'record'}: {error['msg']}",
            field=field,
            file_name=source,
            clip_id=clip_id,
        ) from None


def _check_clip_id(value: str) -> str:
    if not CLIP_ID_PATTERN.match(value):
        raise ValueError(f"{value!r} is not a safe file name")
    return value


class EmbeddingsProvenance(BaseModel):
    """Which word-vector file the lyrics tensors were built from."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    file: str
    sha256: str
    source: Optional[str] = None


class ManifestHeader(BaseModel):
    """First line of a feature manifest: the corpus text grid."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    lines_max: PositiveInt
    words_max: PositiveInt
    embeddings: Optional[EmbeddingsProvenance] = None


class ManifestRecord(BaseModel):
    """One feature manifest row; feature paths are relative to the manifest."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    clip_id: str = Field(min_length=1)
    label: MoodCluster
    split: Split = Split.TRAIN
    audio_feat: Optional[str] = None
    lyrics_feat: Optional[str] = None

    def feature(self, modality: Modality) -> Optional[str]:
        return self.audio_feat if modality is Modality.AUDIO else self.lyrics_feat

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


class RawRecord(BaseModel):
    """One raw manifest row: a labelled clip with an audio file, a lyrics file or both."""

    model_config = ConfigDict(frozen=True, extra="ignore")

    clip_id: Annotated[str, AfterValidator(_check_clip_id)]
    label: MoodCluster
    split: Split = Split.TRAIN
    audio: Optional[Path] = None
    lyrics: Optional[Path] = None

    @field_validator("audio", "lyrics", mode="before")
    @classmethod
    def empty_path_is_absent(cls, value: Any) -> Any:
        return None if value == "" else value

    @model_validator(mode="after")
    def has_an_asset(self) -> "RawRecord":
        if self.audio is None and self.lyrics is None:
            raise ValueError("record has neither audio nor lyrics")
        return self

    def relative_to(self, base: Path) -> "RawRecord":
        """Asset paths joined onto `base`; absolute paths stay as they are."""
        return self.model_copy(
            update={
                "audio": base / self.audio if self.audio is not None else None,
                "lyrics": base / self.lyrics if self.lyrics is not None else None,
            }
        )
