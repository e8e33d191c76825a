"""
Run configuration: one YAML file describing a reproducible experiment
"""

from pathlib import Path
from typing import Optional, Tuple, Union

import pydantic
import yaml
from pydantic import BaseModel, ConfigDict

from src.config.sections import (
    FeaturesSection,
    ModelSection,
    PathsSection,
    SyntheticSection,
    TrainingSection,
)
from src.config.settings import get_settings
from src.exception import ConfigurationError
from src.model.config import ModelConfig
from src.optim import AdamHyperParams
from src.utils import get_logger

logger = get_logger(__name__)


class RunConfig(BaseModel):
    """Unknown keys are rejected at every level."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    model: ModelSection = ModelSection()
    features: FeaturesSection = FeaturesSection()
    optimizer: AdamHyperParams = AdamHyperParams()
    training: TrainingSection = TrainingSection()
    paths: PathsSection = PathsSection()
    synthetic: SyntheticSection = SyntheticSection()

    @property
    def seed(self) -> int:
        return self.model.seed

    def model_for(self, manifest_grid: Optional[Tuple[int, int]] = None) -> ModelConfig:
        """Concrete architecture for a feature manifest's text grid."""
        return self.model.resolve(self.features.audio_shape, manifest_grid)

    def with_cache_dir(self, cache_dir: Path) -> "RunConfig":
        return self.model_copy(update={"paths": self.paths.model_copy(update={"cache_dir": cache_dir})})


def parse_run_config(data: dict, base_dir: Optional[Path] = None) -> RunConfig:
    try:
        config = RunConfig.model_validate(data)
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        key = ".".join(str(part) for part in first["loc"])
        raise ConfigurationError(
            f"{key}: {first['msg']}",
            config_key=key,
            errors=len(exc.errors()),
        ) from exc

    if base_dir is not None:
        config = config.model_copy(update={"paths": config.paths.resolved(base_dir)})

    override = get_settings().cache_dir
    if override is not None:
        config = config.with_cache_dir(Path(override).resolve())
    return config


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Read a YAML run config; relative paths resolve against its directory."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}", config_key="config") from exc

    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"invalid YAML in {path}: {exc}", config_key="config") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path} must contain a mapping at top level", config_key="config")

    config = parse_run_config(data, base_dir=path.parent.resolve())
    logger.debug("run_config_loaded", path=str(path), depth=config.model.depth)
    return config


def dump_run_config(config: RunConfig) -> str:
    return yaml.safe_dump(config.model_dump(mode="json", exclude_none=True), sort_keys=False)


def save_run_config(config: RunConfig, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_run_config(config), encoding="utf-8")
