from .model_section import ModelSection
from .features_section import FeaturesSection
from .training_section import TrainingSection
from .paths_section import PathsSection
from .synthetic_section import SyntheticSection

__all__ = [
    "ModelSection",
    "FeaturesSection",
    "TrainingSection",
    "PathsSection",
    "SyntheticSection",
]
