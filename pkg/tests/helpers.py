"""Shared builders for small models, random features and on-disk manifests."""

import json
from pathlib import Path
from typing import Dict, Optional, Sequence

import numpy as np

from src.core.models import Modality, MoodCluster
from src.model import ModelConfig
from src.tensor import Tensor, write_tensor
from src.training import Example

TINY_CHANNELS = (4, 8, 16, 32, 64)
TINY_HEAD = (128, 64, 32, 16)
TINY_TOWER = 64

TINY_YAML = """\
model:
  depth: 4
  modalities: [{modalities}]
  embedding_dim: 16
  channels: [4, 8, 16, 32, 64]
  tower_width: 64
  head_widths: [128, 64, 32, 16]
  seed: 7
features:
  clip_samples: 16128
  n_mels: 24
optimizer:
  learning_rate: 0.002
training:
  batch_size: 8
  epochs: {epochs}
paths:
  embeddings: corpus/embeddings.txt
  raw_manifest: corpus/raw_manifest.jsonl
  cache_dir: cache
  checkpoint_dir: runs/{name}
synthetic:
  clips_per_class: 4
  val_per_class: 2
"""


def tiny_config(**overrides) -> ModelConfig:
    """Width-reduced dual-modality model: channels / 32, head / 16, text 8x6, audio 24x64."""
    values = dict(
        depth=4,
        audio_shape=(24, 64),
        lines_max=8,
        words_max=6,
        embedding_dim=16,
        channels=TINY_CHANNELS,
        tower_width=TINY_TOWER,
        head_widths=TINY_HEAD,
        seed=0,
    )
    values.update(overrides)
    return ModelConfig(**values)


def gradcheck_config(**overrides) -> ModelConfig:
    """Smallest model that still runs every block type: 8x12 spectrogram, 4x4 text grid."""
    values = dict(
        depth=3,
        audio_shape=(8, 12),
        lines_max=4,
        words_max=4,
        embedding_dim=3,
        channels=TINY_CHANNELS,
        tower_width=TINY_TOWER,
        head_widths=TINY_HEAD,
        seed=3,
    )
    values.update(overrides)
    return ModelConfig(**values)


def random_inputs(config: ModelConfig, rng: np.random.Generator) -> Dict[str, Tensor]:
    inputs = {}
    if config.uses(Modality.AUDIO):
        inputs["audio"] = Tensor(rng.random(config.audio_input_shape))
    if config.uses(Modality.LYRICS):
        inputs["lyrics"] = Tensor(rng.normal(size=config.lyrics_input_shape))
    return inputs


def random_examples(config: ModelConfig, n: int, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    examples = []
    for i in range(n):
        inputs = random_inputs(config, rng)
        examples.append(
            Example(clip_id=f"s{i:03d}", label=i % config.n_classes, audio=inputs.get("audio"), lyrics=inputs.get("lyrics"))
        )
    return examples


def write_feature_manifest(
    root: Path,
    config: ModelConfig,
    labels: Sequence[str],
    splits: Optional[Sequence[str]] = None,
    seed: int = 0,
) -> Path:
    """Random feature files plus a manifest that references them."""
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    rows = [json.dumps({"lines_max": config.lines_max, "words_max": config.words_max})]
    for i, label in enumerate(labels):
        clip_id = f"clip{i:03d}"
        inputs = random_inputs(config, rng)
        record = {"clip_id": clip_id, "label": label, "split": splits[i] if splits else "train"}
        if "audio" in inputs:
            write_tensor(root / f"{clip_id}.mel.mnt", inputs["audio"])
            record["audio_feat"] = f"{clip_id}.mel.mnt"
        if "lyrics" in inputs:
            write_tensor(root / f"{clip_id}.lyr.mnt", inputs["lyrics"])
            record["lyrics_feat"] = f"{clip_id}.lyr.mnt"
        rows.append(json.dumps(record))
    path = root / "manifest.jsonl"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


def balanced_labels(n: int) -> list:
    clusters = list(MoodCluster)
    return [clusters[i % len(clusters)].value for i in range(n)]

