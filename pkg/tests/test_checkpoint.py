import dataclasses
import json

import numpy as np
import pytest

from src.core.models import Mode
from src.exception import ConfigurationError, FileProcessingError, FormatError, ShapeError
from src.model import MoodNet, ModelParams
from src.optim import AdamHyperParams, AdamState, adam_step
from src.repositories import Checkpoint, CheckpointRepository, load_checkpoint, resolve_checkpoint_dir, save_checkpoint
from src.tensor import Tensor, write_tensor

from .helpers import random_inputs, tiny_config


@pytest.fixture
def checkpoint(rng) -> Checkpoint:
    config = tiny_config(depth=3)
    net = MoodNet(config)
    params = net.init_params()
    result = net.forward(params, mode=Mode.TRAIN, seed=0, **random_inputs(config, rng))
    grads = net.backward(params, result.cache, 1)
    state = AdamState.fresh(params, AdamHyperParams(learning_rate=0.01))
    new_params, state = adam_step(params, grads, state)
    return Checkpoint(
        config=config,
        params=ModelParams(new_params),
        adam_state=state,
        epochs_completed=1,
        metadata={"features": {"n_mels": 24}},
    )


def test_round_trip_is_bit_exact_in_float32(tmp_path, checkpoint):
    save_checkpoint(tmp_path / "ckpt", checkpoint)
    loaded = load_checkpoint(tmp_path / "ckpt", dtype=np.float32)
    assert loaded.config == checkpoint.config
    assert loaded.epochs_completed == 1
    assert loaded.adam_state.t == 1
    assert loaded.adam_state.hyper == checkpoint.adam_state.hyper
    assert loaded.metadata == {"features": {"n_mels": 24}}
    assert list(loaded.params) == list(checkpoint.params)
    for name, tensor in checkpoint.params.items():
        assert loaded.params[name].equals(tensor.astype(np.float32))
        assert loaded.adam_state.m[name].equals(checkpoint.adam_state.m[name].astype(np.float32))
        assert loaded.adam_state.v[name].equals(checkpoint.adam_state.v[name].astype(np.float32))


def test_manifest_is_deterministic(tmp_path, checkpoint):
    save_checkpoint(tmp_path / "a", checkpoint)
    save_checkpoint(tmp_path / "b", checkpoint)
    assert (tmp_path / "a" / "manifest.json").read_bytes() == (tmp_path / "b" / "manifest.json").read_bytes()
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest["parameters"][0] == {"name": "audio.conv1.kernel", "shape": [3, 3, 1, 4]}


def test_overwrite_replaces_previous(tmp_path, checkpoint):
    save_checkpoint(tmp_path / "ckpt", checkpoint)
    save_checkpoint(tmp_path / "ckpt", dataclasses.replace(checkpoint, epochs_completed=2))
    assert sorted(p.name for p in tmp_path.iterdir()) == ["ckpt"]
    assert load_checkpoint(tmp_path / "ckpt").epochs_completed == 2


def test_failed_save_keeps_previous(tmp_path, checkpoint, monkeypatch):
    save_checkpoint(tmp_path / "ckpt", checkpoint)

    def broken_write(path, tensor):
        raise OSError("disk full")

    monkeypatch.setattr("src.repositories.checkpoint.write_tensor", broken_write)
    with pytest.raises(OSError):
        save_checkpoint(tmp_path / "ckpt", dataclasses.replace(checkpoint, epochs_completed=2))
    assert sorted(p.name for p in tmp_path.iterdir()) == ["ckpt"]
    monkeypatch.undo()
    assert load_checkpoint(tmp_path / "ckpt").epochs_completed == 1


def test_tensor_with_wrong_shape(tmp_path, checkpoint):
    directory = save_checkpoint(tmp_path / "ckpt", checkpoint)
    write_tensor(directory / "params" / "head.logits.bias.mnt", Tensor(np.zeros(4)))
    with pytest.raises(ShapeError):
        load_checkpoint(directory)


def test_listing_disagrees_with_architecture(tmp_path, checkpoint):
    directory = save_checkpoint(tmp_path / "ckpt", checkpoint)
    manifest_path = directory / "manifest.json"
    manifest = json.loads(manifest_path.read_text())
    manifest["parameters"][0]["shape"] = [3, 3, 1, 5]
    manifest_path.write_text(json.dumps(manifest))
    with pytest.raises(ShapeError):
        load_checkpoint(directory)


def test_missing_and_corrupt(tmp_path, checkpoint):
    with pytest.raises(FileProcessingError):
        load_checkpoint(tmp_path / "nothing")
    directory = save_checkpoint(tmp_path / "ckpt", checkpoint)
    (directory / "manifest.json").write_text("{not json")
    with pytest.raises(FormatError):
        load_checkpoint(directory)


@pytest.mark.parametrize(
    "edit",
    [
        lambda m: m.update(format="something-else"),
        lambda m: m.update(version=2),
        lambda m: m["adam"].update(t=-1),
        lambda m: m.pop("parameters"),
        lambda m: m.update(extra=1),
    ],
)
def test_invalid_manifest_fields(tmp_path, checkpoint, edit):
    directory = save_checkpoint(tmp_path / "ckpt", checkpoint)
    manifest_path = directory / "manifest.json"
    manifest = json.loads(manifest_path.read_text())
    edit(manifest)
    manifest_path.write_text(json.dumps(manifest))
    with pytest.raises(FormatError):
        load_checkpoint(directory)


def test_missing_tensor_file(tmp_path, checkpoint):
    directory = save_checkpoint(tmp_path / "ckpt", checkpoint)
    (directory / "adam" / "v" / "head.dense1.weights.mnt").unlink()
    with pytest.raises(FileProcessingError):
        load_checkpoint(directory)


def test_expected_config(tmp_path, checkpoint):
    directory = save_checkpoint(tmp_path / "ckpt", checkpoint)
    assert load_checkpoint(directory, expected_config=checkpoint.config).config == checkpoint.config
    with pytest.raises(ConfigurationError) as exc:
        load_checkpoint(directory, expected_config=tiny_config(depth=4, head_widths=(64, 32)))
    assert exc.value.details["fields"] == ["depth", "head_widths"]
    # seed and dropout do not change the layer stack
    relaxed = tiny_config(depth=3, seed=11, dropout=0.5)
    assert load_checkpoint(directory, expected_config=relaxed).config == checkpoint.config


def test_repository_series(tmp_path, checkpoint):
    repo = CheckpointRepository(tmp_path / "run")
    assert repo.list() == []
    repo.save(checkpoint, repo.INIT)
    repo.save_epoch(checkpoint, 2)
    repo.save_epoch(checkpoint, 1)
    assert repo.list() == ["init", "epoch_0001", "epoch_0002", "latest"]
    assert repo.load().epochs_completed == 1
    assert resolve_checkpoint_dir(tmp_path / "run") == tmp_path / "run" / "latest"
    assert resolve_checkpoint_dir(tmp_path / "run" / "init") == tmp_path / "run" / "init"
    with pytest.raises(FileProcessingError):
        resolve_checkpoint_dir(tmp_path)
