from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from src.config.settings import get_settings
from src.utils import setup_logging

from .helpers import TINY_YAML


@pytest.fixture(scope="session", autouse=True)
def _logging():
    setup_logging(level="WARNING", json_format=False)


@pytest.fixture(autouse=True)
def _clean_settings(monkeypatch):
    for name in ("MOODNET_CACHE", "MOODNET_LOG_LEVEL", "MOODNET_LOG_FORMAT", "MOODNET_LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("MOODNET_IO_RETRIES", "1")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_yaml(tmp_path) -> Callable[..., Path]:
    def write(name: str = "fused", modalities: str = "audio, lyrics", epochs: int = 2) -> Path:
        path = tmp_path / f"{name}.yaml"
        path.write_text(TINY_YAML.format(name=name, modalities=modalities, epochs=epochs), encoding="utf-8")
        return path

    return write
