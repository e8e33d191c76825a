from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.features.constants import (
    CLIP_SAMPLES,
    FMAX,
    FMIN,
    HOP_LENGTH,
    MIN_SAMPLE_RATE,
    N_FFT,
    N_MELS,
    SAMPLE_RATE,
    frame_count,
)


class FeaturesSection(BaseModel):
    """Audio front-end parameters and featurization options."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sample_rate: int = Field(default=SAMPLE_RATE, ge=MIN_SAMPLE_RATE)
    clip_samples: int = Field(default=CLIP_SAMPLES, ge=1)
    n_fft: int = Field(default=N_FFT, ge=2)
    hop_length: int = Field(default=HOP_LENGTH, ge=1)
    n_mels: int = Field(default=N_MELS, ge=1)
    fmin: float = Field(default=FMIN, ge=0.0)
    fmax: float = FMAX

    # optional truncation of the corpus text grid
    lines_cap: Optional[int] = Field(default=None, ge=1)
    words_cap: Optional[int] = Field(default=None, ge=1)

    workers: int = Field(default=1, ge=1)

    # where the word vectors come from, e.g. "glove 6B-token corpus"; metadata only
    embeddings_source: Optional[str] = None

    @model_validator(mode="after")
    def validate_band(self) -> "FeaturesSection":
        if not self.fmin < self.fmax <= self.sample_rate / 2:
            raise ValueError("need fmin < fmax <= sample_rate / 2")
        if self.hop_length > self.n_fft:
            raise ValueError("hop_length must not exceed n_fft")
        return self

    @property
    def audio_shape(self) -> Tuple[int, int]:
        return self.n_mels, frame_count(self.clip_samples, self.hop_length)

    def fingerprint(self) -> Dict[str, Any]:
        """Fields that change the audio feature values."""
        return self.model_dump(mode="json", exclude={"lines_cap", "words_cap", "workers", "embeddings_source"})
