"""Services module."""
from .base_service import BaseService
from .featurize_service import FeaturizeService, FeaturizeSummary, RawRecord, audio_features, load_raw_manifest
from .experiment_service import AblationRow, ExperimentService, Prediction, ablation_table

__all__ = [
    "BaseService",
    "FeaturizeService",
    "FeaturizeSummary",
    "RawRecord",
    "audio_features",
    "load_raw_manifest",
    "AblationRow",
    "ExperimentService",
    "Prediction",
    "ablation_table",
]
