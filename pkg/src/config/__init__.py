from .settings import Settings, get_settings
from .run_config import RunConfig, dump_run_config, load_run_config, parse_run_config, save_run_config
from .sections import FeaturesSection, ModelSection, PathsSection, SyntheticSection, TrainingSection

__all__ = [
    "Settings",
    "get_settings",
    "RunConfig",
    "dump_run_config",
    "load_run_config",
    "parse_run_config",
    "save_run_config",
    "FeaturesSection",
    "ModelSection",
    "PathsSection",
    "SyntheticSection",
    "TrainingSection",
]
