"""Core interfaces module."""
from .repositories import ICheckpointRepository, IFeatureCache

__all__ = ["ICheckpointRepository", "IFeatureCache"]
