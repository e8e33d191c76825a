from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.core.models import MODALITY_ORDER, N_CLUSTERS, Modality
from src.exception import ConfigurationError
from src.model.config import DEFAULT_CHANNELS, DEFAULT_HEAD_WIDTHS, DEPTHS, TOWER_WIDTH, ModelConfig

# Used for single-modality audio models, where the text grid is never read.
_UNUSED_GRID = (20, 10)


class ModelSection(BaseModel):
    """Architecture section; the text grid may be left to the feature manifest."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    depth: int = 4
    modalities: Tuple[Modality, ...] = MODALITY_ORDER
    lines_max: Optional[int] = Field(default=None, ge=1)
    words_max: Optional[int] = Field(default=None, ge=1)
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
        return v

    def text_grid(self, manifest_grid: Optional[Tuple[int, int]]) -> Tuple[int, int]:
        """Configured grid, checked against the manifest's when both exist."""
        configured = (self.lines_max, self.words_max)
        if manifest_grid is None:
            if None in configured:
                if Modality.LYRICS in self.modalities:
                    raise ConfigurationError(
                        "lines_max/words_max are not set and no feature manifest provides them",
                        config_key="model.lines_max",
                    )
                return _UNUSED_GRID
            return configured
        for key, mine, theirs in zip(("lines_max", "words_max"), configured, manifest_grid):
            if mine is not None and mine != theirs:
                raise ConfigurationError(
                    f"model.{key}={mine} does not match the feature manifest ({theirs})",
                    config_key=f"model.{key}",
                )
        return manifest_grid

    def resolve(self, audio_shape: Tuple[int, int], manifest_grid: Optional[Tuple[int, int]] = None) -> ModelConfig:
        lines_max, words_max = self.text_grid(manifest_grid)
        try:
            return ModelConfig(
                depth=self.depth,
                modalities=self.modalities,
                audio_shape=audio_shape,
                lines_max=lines_max,
                words_max=words_max,
                embedding_dim=self.embedding_dim,
                channels=self.channels,
                tower_width=self.tower_width,
                head_widths=self.head_widths,
                dropout=self.dropout,
                n_classes=self.n_classes,
                seed=self.seed,
            )
        except ValidationError as exc:
            raise ConfigurationError(str(exc.errors()[0]["msg"]), config_key="model") from exc
