from pydantic import BaseModel, ConfigDict, Field

from src.core.models import Precision


class TrainingSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    batch_size: int = Field(default=16, ge=1)
    epochs: int = Field(default=50, ge=0)
    precision: Precision = Precision.DOUBLE
