from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class SyntheticSection(BaseModel):
    """Shape of the generated corpus used for smoke runs and ablations."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    clips_per_class: int = Field(default=8, ge=1)
    val_per_class: int = Field(default=2, ge=0)
    clip_seconds: Optional[float] = Field(default=None, gt=0.0)  # None: the features clip length
    source_sample_rate: int = Field(default=16000, ge=8000)
    vocabulary_size: int = Field(default=12, ge=1)  # words per cluster
    song_lines: Tuple[int, int] = (4, 8)
    line_words: Tuple[int, int] = (3, 6)
    noise: float = Field(default=0.05, ge=0.0)
