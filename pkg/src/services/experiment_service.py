"""Experiment service: training, evaluation, inspection, prediction and ablation runs."""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import FeaturesSection, RunConfig, load_run_config, save_run_config
from src.core.models import N_CLUSTERS, Modality, MoodCluster, Split
from src.exception import InputError
from src.features import build_lyrics_tensor, load_embeddings, tokenize
from src.model import ModelConfig, build_network
from src.repositories import Checkpoint, FeatureCache, check_architecture, load_checkpoint, resolve_checkpoint_dir
from src.training import DatasetManifest, EvalReport, TrainResult, as_percent, class_names, evaluate, train

from .base_service import BaseService
from .featurize_service import FeaturizeService, FeaturizeSummary, audio_features, read_lyrics

RUN_CONFIG = "config.yaml"


@dataclass(frozen=True)
class Prediction:
    probs: np.ndarray
    label: int

    @property
    def names(self) -> Sequence[str]:
        return class_names(len(self.probs))

    @property
    def cluster(self) -> Optional[MoodCluster]:
        """The mood cluster, when the model scores the five clusters."""
        return MoodCluster.from_index(self.label) if len(self.probs) == N_CLUSTERS else None

    def _moods(self, index: int) -> Sequence[str]:
        return MoodCluster.from_index(index).moods if len(self.probs) == N_CLUSTERS else ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cluster": self.names[self.label],
            "moods": list(self._moods(self.label)),
            "probabilities": {name: float(p) for name, p in zip(self.names, self.probs)},
        }

    def to_table(self) -> str:
        lines = []
        for i, (name, p) in enumerate(zip(self.names, self.probs)):
            marker = "*" if i == self.label else " "
            lines.append(f"{marker} {name:<4}{100.0 * p:7.2f}%  {', '.join(self._moods(i))}".rstrip())
        return "\n".join(lines)


@dataclass(frozen=True)
class AblationRow:
    name: str
    modalities: Sequence[Modality]
    depth: int
    split: str
    report: EvalReport
    failed: Tuple[str, ...] = ()  # clip ids featurization dropped

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "modalities": [m.value for m in self.modalities],
            "depth": self.depth,
            "split": self.split,
            "macro_f1": self.report.macro_f1,
            "n_samples": self.report.n_samples,
            "failed": list(self.failed),
        }


def ablation_table(rows: Sequence[AblationRow]) -> str:
    """Macro F1 per run as a two-decimal percentage."""
    width = max([len("config")] + [len(r.name) for r in rows])
    lines = [f"{'config':<{width}}  {'modalities':<13}{'depth':>5}  {'split':<5}{'F1':>8}"]
    for r in rows:
        modalities = "+".join(m.value for m in r.modalities)
        lines.append(f"{r.name:<{width}}  {modalities:<13}{r.depth:>5}  {r.split:<5}{as_percent(r.report.macro_f1):>8}")
    return "\n".join(lines)


class ExperimentService(BaseService):
    """Service for running experiments described by a RunConfig."""

    def __init__(self, config: RunConfig):
        """Initialize experiment service.

        Args:
            config: Loaded run configuration
        """
        super().__init__()
        self.config = config

    # ------------------------------------------------------------------
    # Data
    # ------------------------------------------------------------------

    def featurize(self, raw_manifest: Optional[Path] = None, manifest: Optional[Path] = None) -> FeaturizeSummary:
        paths = self.config.paths
        service = FeaturizeService(
            features=self.config.features,
            cache=FeatureCache(paths.require("cache_dir")),
            embeddings=paths.embeddings,
            embedding_dim=self.config.model.embedding_dim,
            embeddings_source=self.config.features.embeddings_source,
        )
        return service.run(
            raw_manifest or paths.require("raw_manifest"),
            manifest_path=manifest or paths.feature_manifest(),
        )

    def load_manifest(self, manifest: Optional[Path] = None) -> DatasetManifest:
        return DatasetManifest.load(manifest or self.config.paths.feature_manifest())

    def model_config(self, manifest: DatasetManifest) -> ModelConfig:
        return self.config.model_for(manifest.grid)

    # ------------------------------------------------------------------
    # Train / evaluate
    # ------------------------------------------------------------------

    def train(self, manifest: Optional[Path] = None, run_dir: Optional[Path] = None) -> TrainResult:
        """Train from the feature manifest, writing checkpoints and epochs.csv to the run directory.

        Args:
            manifest: Feature manifest (default: from the config paths)
            run_dir: Output directory (default: paths.checkpoint_dir)

        Returns:
            Final checkpoint and per-epoch history
        """
        dataset = self.load_manifest(manifest)
        model_config = self.model_config(dataset)
        run_dir = run_dir or self.config.paths.require("checkpoint_dir")
        save_run_config(self.config, Path(run_dir) / RUN_CONFIG)
        metadata: Dict[str, Any] = {"features": self.config.features.model_dump(mode="json")}
        if dataset.embeddings is not None:
            metadata["embeddings"] = dataset.embeddings.model_dump(mode="json")
        try:
            return train(
                model_config,
                dataset,
                hyper=self.config.optimizer,
                training=self.config.training,
                run_dir=run_dir,
                metadata=metadata,
            )
        except Exception as e:
            self._handle_error(e, {"operation": "train", "run_dir": str(run_dir)})

    def load_checkpoint(self, checkpoint: Path, expected: Optional[ModelConfig] = None) -> Checkpoint:
        """Read a checkpoint; with `expected`, a different architecture is a ConfigurationError."""
        dtype = np.dtype(self.config.training.precision.dtype)
        return load_checkpoint(resolve_checkpoint_dir(checkpoint), dtype=dtype, expected_config=expected)

    def evaluate(
        self,
        checkpoint: Path,
        manifest: Optional[Path] = None,
        split: Optional[Split] = None,
    ) -> EvalReport:
        dataset = self.load_manifest(manifest)
        ckpt = self.load_checkpoint(checkpoint, expected=self.model_config(dataset))
        return evaluate(ckpt, dataset, split=split, dtype=np.dtype(self.config.training.precision.dtype))

    # ------------------------------------------------------------------
    # Inspect / predict
    # ------------------------------------------------------------------

    @staticmethod
    def inspect(checkpoint: Path) -> Dict[str, Any]:
        """Every named parameter with its shape, plus the total parameter count."""
        ckpt = load_checkpoint(resolve_checkpoint_dir(checkpoint))
        net = build_network(ckpt.config)
        return {
            "config": ckpt.config.model_dump(mode="json"),
            "epochs_completed": ckpt.epochs_completed,
            "adam_step": ckpt.adam_state.t,
            "parameters": [{"name": name, "shape": list(t.shape), "size": t.size} for name, t in ckpt.params.items()],
            "total_parameters": net.parameter_count(),
        }

    def predict(
        self,
        checkpoint: Path,
        audio: Optional[Path] = None,
        lyrics: Optional[Path] = None,
        embeddings: Optional[Path] = None,
    ) -> Prediction:
        ckpt = self.load_checkpoint(checkpoint)
        config = ckpt.config
        # no manifest here: the text grid is the one the checkpoint was trained on
        check_architecture(config, self.config.model_for(config.text_grid), checkpoint)
        features = FeaturesSection.model_validate(ckpt.metadata.get("features", {}))

        inputs = {}
        if config.uses(Modality.AUDIO):
            if audio is None:
                raise InputError("this model needs an audio file", source="audio")
            inputs["audio"] = audio_features(audio, features)
        if config.uses(Modality.LYRICS):
            if lyrics is None:
                raise InputError("this model needs a lyrics file", source="lyrics")
            table = load_embeddings(
                embeddings or self.config.paths.require("embeddings"),
                dim=config.embedding_dim,
            )
            tensor = build_lyrics_tensor(
                tokenize(read_lyrics(lyrics)),
                table,
                words_max=config.words_max,
                lines_max=config.lines_max,
            )
            inputs["lyrics"] = tensor.tensor

        result = build_network(config).forward(ckpt.params, **inputs)
        probs = result.probs.numpy()
        return Prediction(probs=probs, label=int(result.prediction))

    # ------------------------------------------------------------------
    # Ablation
    # ------------------------------------------------------------------

    @classmethod
    def ablate(cls, config_paths: Sequence[Path], out_dir: Path) -> List[AblationRow]:
        """Featurize, train and evaluate each config through the same harness.

        Args:
            config_paths: One run config per ablation arm
            out_dir: Parent directory for the per-config run directories

        Returns:
            One row per config, scored on the val split when it exists, with the
            clip ids its featurization dropped
        """
        rows = []
        for path in config_paths:
            service = cls(load_run_config(path))
            name = Path(path).stem
            failed: Tuple[str, ...] = ()
            if service.config.paths.raw_manifest is not None:
                summary = service.featurize()
                failed = tuple(sorted(summary.failures))
                if failed:
                    service._logger.warning("featurize_failures", config=name, failed=len(failed))
            result = service.train(run_dir=Path(out_dir) / name)
            dataset = service.load_manifest()
            split = Split.VAL if len(dataset.subset(Split.VAL)) else None
            report = evaluate(result.checkpoint, dataset, split=split)
            rows.append(
                AblationRow(
                    name=name,
                    modalities=result.checkpoint.config.modalities,
                    depth=result.checkpoint.config.depth,
                    split=split.value if split else "all",
                    report=report,
                    failed=failed,
                )
            )
            service._logger.info("ablation_arm_finished", config=name, macro_f1=round(report.macro_f1, 6))
        return rows
