"""Synthetic multimodal corpus for smoke runs and ablations.

Each mood cluster gets its own tone pair and amplitude-modulation rate for the
audio, and its own vocabulary clustered around one direction of the embedding
space for the lyrics, so both modalities carry a learnable class signal. The
generator writes 16-bit PCM WAVs, lyrics text files, an embedding file and a
raw-asset manifest ready for featurization.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np
import soundfile as sf

from src.config.sections import FeaturesSection, SyntheticSection
from src.core.models import MoodCluster, Split
from src.features import EMBEDDING_DIM
from src.tensor import atomic_write_bytes
from src.utils import get_logger

logger = get_logger(__name__)

RAW_MANIFEST = "raw_manifest.jsonl"
EMBEDDINGS = "embeddings.txt"

# (low, high) partials per cluster, in Hz
_TONES = ((220.0, 330.0), (440.0, 660.0), (880.0, 1320.0), (1760.0, 2640.0), (3000.0, 4500.0))
_AM_RATES = (0.5, 2.0, 4.0, 6.0, 8.0)
_FILLERS = ("the", "and", "we", "you", "night", "down", "oh", "still")


@dataclass(frozen=True)
class SyntheticCorpus:
    root: Path
    raw_manifest: Path
    embeddings: Path
    n_clips: int


def cluster_vocabulary(cluster: MoodCluster, size: int) -> List[str]:
    """The cluster's mood adjectives, extended with numbered variants up to `size` words."""
    words = list(cluster.moods)
    base = cluster.moods[0]
    j = 0
    while len(words) < size:
        words.append(f"{base}{j}")
        j += 1
    return words[:size]


def synth_audio(
    cluster: MoodCluster,
    rng: np.random.Generator,
    sample_rate: int,
    seconds: float,
    noise: float,
) -> np.ndarray:
    n = max(1, int(round(seconds * sample_rate)))
    t = np.arange(n) / sample_rate
    low, high = _TONES[cluster.index]
    detune = 1.0 + rng.uniform(-0.02, 0.02)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=2)
    signal = 0.5 * np.sin(2 * np.pi * low * detune * t + phase[0]) + 0.3 * np.sin(2 * np.pi * high * detune * t + phase[1])
    envelope = 0.6 + 0.4 * np.sin(2 * np.pi * _AM_RATES[cluster.index] * t)
    samples = signal * envelope + noise * rng.standard_normal(n)
    return np.clip(samples, -1.0, 1.0)


def synth_lyrics(
    vocabulary: Sequence[str],
    rng: np.random.Generator,
    song_lines: Sequence[int],
    line_words: Sequence[int],
) -> str:
    lines = []
    for _ in range(int(rng.integers(song_lines[0], song_lines[1] + 1))):
        words = []
        for _ in range(int(rng.integers(line_words[0], line_words[1] + 1))):
            pool = _FILLERS if rng.random() < 0.3 else vocabulary
            words.append(str(pool[int(rng.integers(len(pool)))]))
        lines.append(" ".join(words).capitalize())
    return "\n".join(lines) + "\n"


def synth_embeddings(vocabularies: Dict[MoodCluster, List[str]], rng: np.random.Generator, dim: int) -> str:
    centroids = rng.standard_normal((len(vocabularies), dim))
    centroids /= np.linalg.norm(centroids, axis=1, keepdims=True)
    rows = []
    for cluster, words in vocabularies.items():
        for word in words:
            vector = centroids[cluster.index] + 0.3 * rng.standard_normal(dim) / np.sqrt(dim)
            rows.append(word + " " + " ".join(f"{x:.6f}" for x in vector))
    for word in _FILLERS:
        vector = 0.3 * rng.standard_normal(dim) / np.sqrt(dim)
        rows.append(word + " " + " ".join(f"{x:.6f}" for x in vector))
    return "\n".join(rows) + "\n"


def generate_corpus(
    root: Union[str, Path],
    synthetic: SyntheticSection = SyntheticSection(),
    features: FeaturesSection = FeaturesSection(),
    embedding_dim: int = EMBEDDING_DIM,
    seed: int = 0,
) -> SyntheticCorpus:
    """Write the corpus under `root`; identical arguments give byte-identical files."""
    root = Path(root)
    (root / "audio").mkdir(parents=True, exist_ok=True)
    (root / "lyrics").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5EED]))

    seconds = synthetic.clip_seconds or features.clip_samples / features.sample_rate
    vocabularies = {c: cluster_vocabulary(c, synthetic.vocabulary_size) for c in MoodCluster}

    records = []
    per_class = synthetic.clips_per_class + synthetic.val_per_class
    for cluster in MoodCluster:
        for k in range(per_class):
            clip_id = f"{cluster.value.lower()}-{k:03d}"
            split = Split.TRAIN if k < synthetic.clips_per_class else Split.VAL
            samples = synth_audio(cluster, rng, synthetic.source_sample_rate, seconds, synthetic.noise)
            sf.write(str(root / "audio" / f"{clip_id}.wav"), samples, synthetic.source_sample_rate, subtype="PCM_16")
            text = synth_lyrics(vocabularies[cluster], rng, synthetic.song_lines, synthetic.line_words)
            (root / "lyrics" / f"{clip_id}.txt").write_text(text, encoding="utf-8")
            records.append({
                "clip_id": clip_id,
                "audio": f"audio/{clip_id}.wav",
                "lyrics": f"lyrics/{clip_id}.txt",
                "label": cluster.value,
                "split": split.value,
            })

    embeddings = root / EMBEDDINGS
    atomic_write_bytes(embeddings, synth_embeddings(vocabularies, rng, embedding_dim).encode("utf-8"))
    manifest = root / RAW_MANIFEST
    body = "\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n"
    atomic_write_bytes(manifest, body.encode("utf-8"))

    logger.info("synthetic_corpus_written", root=str(root), clips=len(records), seconds=round(seconds, 3))
    return SyntheticCorpus(root=root, raw_manifest=manifest, embeddings=embeddings, n_clips=len(records))
