import pytest

from src.config import RunConfig, dump_run_config, get_settings, load_run_config, parse_run_config
from src.core.models import Modality, Precision
from src.exception import ConfigurationError


def test_defaults():
    config = parse_run_config({})
    assert config.features.audio_shape == (96, 1366)
    assert config.training.batch_size == 16
    assert config.training.epochs == 50
    assert config.training.precision is Precision.DOUBLE
    assert config.optimizer.learning_rate == 1e-3
    assert config.model.modalities == (Modality.AUDIO, Modality.LYRICS)


@pytest.mark.parametrize(
    "data, key",
    [
        ({"modle": {}}, "modle"),
        ({"model": {"depht": 4}}, "model.depht"),
        ({"training": {"batch_size": 0}}, "training.batch_size"),
        ({"model": {"depth": 6}}, "model.depth"),
    ],
)
def test_invalid_values_name_the_key(data, key):
    with pytest.raises(ConfigurationError) as exc:
        parse_run_config(data)
    assert exc.value.details["config_key"] == key
    assert exc.value.exit_code == 2


def test_feature_band_validation():
    with pytest.raises(ConfigurationError):
        parse_run_config({"features": {"fmax": 7000.0}})


def test_relative_paths_resolve_against_the_file(tmp_path):
    path = tmp_path / "exp" / "run.yaml"
    path.parent.mkdir()
    path.write_text("paths:\n  cache_dir: cache\n  embeddings: /abs/vectors.txt\n")
    config = load_run_config(path)
    assert config.paths.cache_dir == (tmp_path / "exp" / "cache").resolve()
    assert str(config.paths.embeddings) == "/abs/vectors.txt"
    assert config.paths.feature_manifest() == config.paths.cache_dir / "manifest.jsonl"


def test_cache_override_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("MOODNET_CACHE", str(tmp_path / "elsewhere"))
    get_settings.cache_clear()
    config = parse_run_config({"paths": {"cache_dir": "/ignored"}})
    assert config.paths.cache_dir == (tmp_path / "elsewhere").resolve()


def test_missing_path_is_reported():
    with pytest.raises(ConfigurationError) as exc:
        parse_run_config({}).paths.require("embeddings")
    assert exc.value.details["config_key"] == "paths.embeddings"


def test_bad_yaml(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("model: [unclosed\n")
    with pytest.raises(ConfigurationError):
        load_run_config(path)
    path.write_text("- just\n- a list\n")
    with pytest.raises(ConfigurationError):
        load_run_config(path)
    with pytest.raises(ConfigurationError):
        load_run_config(tmp_path / "missing.yaml")


def test_dump_and_reload(tmp_path, tiny_yaml):
    config = load_run_config(tiny_yaml())
    again = tmp_path / "again.yaml"
    again.write_text(dump_run_config(config))
    assert load_run_config(again) == config


class TestModelResolution:
    def test_grid_from_manifest(self, tiny_yaml):
        config = load_run_config(tiny_yaml())
        model = config.model_for((8, 6))
        assert model.text_grid == (8, 6)
        assert model.audio_shape == (24, 64)
        assert model.channels == (4, 8, 16, 32, 64)

    def test_configured_grid_must_match_manifest(self):
        config = parse_run_config({"model": {"lines_max": 12}})
        with pytest.raises(ConfigurationError):
            config.model_for((20, 10))
        assert config.model_for((12, 10)).text_grid == (12, 10)

    def test_lyrics_model_needs_a_grid(self):
        with pytest.raises(ConfigurationError):
            parse_run_config({}).model_for(None)

    def test_audio_only_needs_no_grid(self):
        config = parse_run_config({"model": {"modalities": ["audio"]}})
        assert config.model_for(None).modalities == (Modality.AUDIO,)

    def test_grid_below_minimum(self):
        with pytest.raises(ConfigurationError):
            parse_run_config({}).model_for((3, 10))


def test_run_config_is_frozen():
    config = RunConfig()
    with pytest.raises(ValueError):
        config.training = None


def test_settings_log_level(monkeypatch):
    monkeypatch.setenv("MOODNET_LOG_LEVEL", "debug")
    get_settings.cache_clear()
    assert get_settings().log_level == "DEBUG"
    monkeypatch.setenv("MOODNET_LOG_LEVEL", "loud")
    get_settings.cache_clear()
    with pytest.raises(ValueError):
        get_settings()
