"""Declarative MoodNet architecture configuration."""

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.models import MODALITY_ORDER, N_CLUSTERS, Modality

DEPTHS = (3, 4, 5)
DEFAULT_CHANNELS: Tuple[int, ...] = (128, 256, 512, 1024, 2048)
DEFAULT_HEAD_WIDTHS: Tuple[int, ...] = (2048, 1024, 512, 256)
TOWER_WIDTH = 2048
MIN_TEXT_EXTENT = 4


class ModelConfig(BaseModel):
    """Everything needed to derive the layer stack and every parameter shape."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    depth: int = 4
    modalities: Tuple[Modality, ...] = MODALITY_ORDER
    audio_shape: Tuple[int, int] = (96, 1366)
    lines_max: int = 20
    words_max: int = 10
    embedding_dim: int = Field(default=100, ge=1)
    channels: Tuple[int, ...] = DEFAULT_CHANNELS
    tower_width: int = Field(default=TOWER_WIDTH, ge=1)
    head_widths: Tuple[int, ...] = DEFAULT_HEAD_WIDTHS
    dropout: float = Field(default=0.2, ge=0.0, lt=1.0)
    n_classes: int = Field(default=N_CLUSTERS, ge=2)
    seed: int = Field(default=0, ge=0)

    @field_validator("depth")
    @classmethod
    def validate_depth(cls, v: int) -> int:
        if v not in DEPTHS:
            raise ValueError(f"depth must be one of {DEPTHS}")
        return v

    @field_validator("modalities")
    @classmethod
    def validate_modalities(cls, v: Tuple[Modality, ...]) -> Tuple[Modality, ...]:
        if not v:
            raise ValueError("at least one modality is required")
        return tuple(m for m in MODALITY_ORDER if m in set(v))

    @field_validator("channels")
    @classmethod
    def validate_channels(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(v) != max(DEPTHS) or any(c < 1 for c in v):
            raise ValueError(f"channels must list {max(DEPTHS)} positive widths")
        return v

    @field_validator("head_widths", "audio_shape")
    @classmethod
    def validate_positive(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(e < 1 for e in v):
            raise ValueError("extents must be positive")
        return v

    @model_validator(mode="after")
    def validate_text_grid(self) -> "ModelConfig":
        if Modality.LYRICS in self.modalities and min(self.lines_max, self.words_max) < MIN_TEXT_EXTENT:
            raise ValueError(f"lines_max and words_max must be >= {MIN_TEXT_EXTENT}")
        return self

    def uses(self, modality: Modality) -> bool:
        return modality in self.modalities

    def architecture_diff(self, other: "ModelConfig") -> List[str]:
        """Names of fields that change the layer stack and differ from `other`.

        Seed and dropout are ignored, and so are the input extents of a
        modality neither config uses.
        """
        exclude = {"seed", "dropout"}
        if not (self.uses(Modality.LYRICS) or other.uses(Modality.LYRICS)):
            exclude |= {"lines_max", "words_max", "embedding_dim"}
        if not (self.uses(Modality.AUDIO) or other.uses(Modality.AUDIO)):
            exclude.add("audio_shape")
        mine, theirs = self.model_dump(exclude=exclude), other.model_dump(exclude=exclude)
        return sorted(name for name in mine if mine[name] != theirs[name])

    @property
    def text_grid(self) -> Tuple[int, int]:
        return self.lines_max, self.words_max

    @property
    def audio_input_shape(self) -> Tuple[int, int, int]:
        return (*self.audio_shape, 1)

    @property
    def lyrics_input_shape(self) -> Tuple[int, int, int]:
        return self.lines_max, self.words_max, self.embedding_dim
