"""Featurization service: raw assets -> cached feature tensors + feature manifest."""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from src.config.sections import FeaturesSection
from src.core.models import Modality
from src.core.schemas import EmbeddingsProvenance, ManifestRecord, RawRecord, parse_record
from src.exception import BaseAppException, FileProcessingError, FormatError, ValidationError
from src.features import (
    EMBEDDING_DIM,
    EmbeddingTable,
    MelFilterbank,
    build_lyrics_tensor,
    corpus_grid,
    load_embeddings,
    mel_filterbank,
    mel_spectrogram,
    read_wav,
    standardize,
    tokenize,
)
from src.model.config import MIN_TEXT_EXTENT
from src.repositories import FeatureCache, content_digest, file_digest
from src.tensor import Tensor, write_tensor
from src.training.dataset import DatasetManifest
from src.utils import retry_on_exception

from .base_service import BaseService

AUDIO = Modality.AUDIO.value
LYRICS = Modality.LYRICS.value


@dataclass(frozen=True)
class FeaturizeSummary:
    manifest_path: Path
    records: int
    written: int
    skipped: int
    grid: Tuple[int, int]
    failures: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    embeddings: Optional[EmbeddingsProvenance] = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "manifest": str(self.manifest_path),
            "records": self.records,
            "written": self.written,
            "skipped": self.skipped,
            "lines_max": self.grid[0],
            "words_max": self.grid[1],
            "failed": sorted(self.failures),
            "embeddings": self.embeddings.model_dump(mode="json") if self.embeddings else None,
        }


def load_raw_manifest(path: Path) -> List[RawRecord]:
    """JSON lines of {clip_id, audio, lyrics, label, split}; asset paths relative to the manifest."""
    path = Path(path)
    try:
        lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    except OSError as exc:
        raise FileProcessingError(f"cannot read raw manifest: {exc}", file_name=str(path)) from exc

    records: List[RawRecord] = []
    seen = set()
    for n, line in enumerate(lines, start=1):
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"line {n}: invalid JSON ({exc})", file_name=str(path)) from exc
        record = parse_record(RawRecord, raw, n, str(path))
        if record.clip_id in seen:
            raise ValidationError(f"duplicate clip_id {record.clip_id!r}", field="clip_id")
        seen.add(record.clip_id)
        records.append(record.relative_to(path.parent))
    return records


@retry_on_exception(exception_types=(OSError,))
def read_lyrics(path: Path) -> str:
    return Path(path).read_text(encoding="utf-8", errors="replace")


def audio_features(path: Path, features: FeaturesSection, filterbank: Optional[MelFilterbank] = None) -> Tensor:
    """WAV file -> [n_mels, frames, 1] normalized log-mel tensor."""
    if filterbank is None:
        filterbank = mel_filterbank(
            n_mels=features.n_mels,
            n_fft=features.n_fft,
            sr=features.sample_rate,
            fmin=features.fmin,
            fmax=features.fmax,
        )
    clip = standardize(read_wav(path), sample_rate=features.sample_rate, n_samples=features.clip_samples)
    return mel_spectrogram(clip, filterbank, n_fft=features.n_fft, hop_length=features.hop_length).tensor


def _audio_job(wav_path: str, features: Dict[str, Any], out_path: str) -> None:
    """Worker-process entry point; writes atomically so partial files are never visible."""
    write_tensor(out_path, audio_features(Path(wav_path), FeaturesSection.model_validate(features)))


def _failure(stage: str, error: Exception) -> Dict[str, Any]:
    entry: Dict[str, Any] = {"stage": stage, "error": type(error).__name__, "message": str(error)}
    if isinstance(error, BaseAppException) and error.details:
        entry["details"] = error.details
    return entry


class FeaturizeService(BaseService):
    """Service that turns a raw-asset manifest into cached features.

    Re-running it only recomputes entries whose inputs changed: the audio
    hash covers the WAV bytes and the audio feature settings, the lyrics hash
    covers the lyrics text, the text grid and the embedding file.
    """

    def __init__(
        self,
        features: FeaturesSection,
        cache: FeatureCache,
        embeddings: Optional[Path] = None,
        embedding_dim: int = EMBEDDING_DIM,
        embeddings_source: Optional[str] = None,
    ):
        """Initialize featurize service.

        Args:
            features: Audio front-end settings and grid caps
            cache: Feature cache repository
            embeddings: Word-vector file; required when any record has lyrics
            embedding_dim: Expected vector dimension
            embeddings_source: Free-text origin of the word vectors, kept as provenance
        """
        super().__init__()
        self.features = features
        self.cache = cache
        self.embeddings = embeddings
        self.embedding_dim = embedding_dim
        self.embeddings_source = embeddings_source

    # ------------------------------------------------------------------
    # Lyrics
    # ------------------------------------------------------------------

    def _tokenize_all(self, records: List[RawRecord], failures: Dict[str, Dict[str, Any]]) -> Dict[str, Tuple[str, list]]:
        texts = {}
        for record in records:
            if record.lyrics is None:
                continue
            try:
                text = read_lyrics(record.lyrics)
            except OSError as exc:
                failures[record.clip_id] = _failure(LYRICS, exc)
                self._logger.warning("record_failed", clip_id=record.clip_id, stage=LYRICS, error=str(exc))
                continue
            texts[record.clip_id] = (text, tokenize(text))
        return texts

    def text_grid(self, songs: List[list]) -> Tuple[int, int]:
        """Corpus maximum, capped by the config and padded up to the smallest grid the text tower accepts."""
        lines_max, words_max = corpus_grid(songs)
        if self.features.lines_cap is not None:
            lines_max = min(lines_max, self.features.lines_cap)
        if self.features.words_cap is not None:
            words_max = min(words_max, self.features.words_cap)
        return max(lines_max, MIN_TEXT_EXTENT), max(words_max, MIN_TEXT_EXTENT)

    def _embedding_table(self) -> Tuple[EmbeddingTable, EmbeddingsProvenance]:
        if self.embeddings is None:
            raise FileProcessingError("records have lyrics but paths.embeddings is not set", file_name="embeddings")
        table = load_embeddings(self.embeddings, dim=self.embedding_dim, provenance=self.embeddings_source)
        provenance = EmbeddingsProvenance(
            file=Path(self.embeddings).name,
            sha256=file_digest(self.embeddings),
            source=table.provenance,
        )
        return table, provenance

    # ------------------------------------------------------------------
    # Audio
    # ------------------------------------------------------------------

    def _featurize_audio(self, records: List[RawRecord], failures: Dict[str, Dict[str, Any]]) -> Tuple[int, int]:
        fingerprint = json.dumps(self.features.fingerprint(), sort_keys=True)
        pending = []
        skipped = 0
        for record in records:
            if record.audio is None or record.clip_id in failures:
                continue
            try:
                digest = content_digest(file_digest(record.audio), fingerprint)
            except OSError as exc:
                failures[record.clip_id] = _failure(AUDIO, exc)
                self._logger.warning("record_failed", clip_id=record.clip_id, stage=AUDIO, error=str(exc))
                continue
            if self.cache.is_fresh(record.clip_id, AUDIO, digest):
                skipped += 1
                self._logger.debug("cache_hit", clip_id=record.clip_id, kind=AUDIO)
            else:
                pending.append((record, digest))

        written = 0
        if self.features.workers > 1 and len(pending) > 1:
            features = self.features.model_dump(mode="json")
            with ProcessPoolExecutor(max_workers=self.features.workers) as pool:
                futures = [
                    (record, digest, pool.submit(_audio_job, str(record.audio), features, str(self.cache.path(record.clip_id, AUDIO))))
                    for record, digest in pending
                ]
                for record, digest, future in futures:
                    try:
                        future.result()
                    except (BaseAppException, OSError) as exc:
                        failures[record.clip_id] = _failure(AUDIO, exc)
                        self._logger.warning("record_failed", clip_id=record.clip_id, stage=AUDIO, error=str(exc))
                        continue
                    self.cache.mark(record.clip_id, AUDIO, digest)
                    written += 1
            return written, skipped

        filterbank = mel_filterbank(
            n_mels=self.features.n_mels,
            n_fft=self.features.n_fft,
            sr=self.features.sample_rate,
            fmin=self.features.fmin,
            fmax=self.features.fmax,
        )
        for record, digest in pending:
            try:
                tensor = audio_features(record.audio, self.features, filterbank)
            except (BaseAppException, OSError) as exc:
                failures[record.clip_id] = _failure(AUDIO, exc)
                self._logger.warning("record_failed", clip_id=record.clip_id, stage=AUDIO, error=str(exc))
                continue
            self.cache.put(record.clip_id, AUDIO, tensor, digest)
            written += 1
        return written, skipped

    # ------------------------------------------------------------------
    # Entry point
    # ------------------------------------------------------------------

    def run(self, raw_manifest: Path, manifest_path: Optional[Path] = None) -> FeaturizeSummary:
        """Featurize every record of a raw manifest.

        Args:
            raw_manifest: JSON-lines raw-asset manifest
            manifest_path: Where to write the feature manifest (default: <cache>/manifest.jsonl)

        Returns:
            Summary with counts, the text grid and per-record failures
        """
        manifest_path = Path(manifest_path) if manifest_path else self.cache.root / "manifest.jsonl"
        records = load_raw_manifest(raw_manifest)
        self.cache.root.mkdir(parents=True, exist_ok=True)
        failures: Dict[str, Dict[str, Any]] = {}

        # pass 1: the corpus grid needs every song tokenized before any tensor is built
        texts = self._tokenize_all(records, failures)
        grid = self.text_grid([tokens for _, tokens in texts.values()])
        lines_max, words_max = grid

        written, skipped = 0, 0
        provenance: Optional[EmbeddingsProvenance] = None
        if texts:
            try:
                table, provenance = self._embedding_table()
            except (BaseAppException, OSError) as exc:
                self._handle_error(exc, {"operation": "load_embeddings"})
            for record in records:
                if record.clip_id not in texts:
                    continue
                text, tokens = texts[record.clip_id]
                digest = content_digest(text, str(lines_max), str(words_max), provenance.sha256)
                if self.cache.is_fresh(record.clip_id, LYRICS, digest):
                    skipped += 1
                    self._logger.debug("cache_hit", clip_id=record.clip_id, kind=LYRICS)
                    continue
                lyrics = build_lyrics_tensor(tokens, table, words_max=words_max, lines_max=lines_max)
                self.cache.put(record.clip_id, LYRICS, lyrics.tensor, digest)
                written += 1

        # pass 2 for audio
        audio_written, audio_skipped = self._featurize_audio(records, failures)
        written += audio_written
        skipped += audio_skipped

        def relative(clip_id: str, kind: str) -> str:
            return os.path.relpath(self.cache.path(clip_id, kind), manifest_path.parent)

        manifest = DatasetManifest(
            records=tuple(
                ManifestRecord(
                    clip_id=r.clip_id,
                    label=r.label,
                    split=r.split,
                    audio_feat=relative(r.clip_id, AUDIO) if r.audio is not None else None,
                    lyrics_feat=relative(r.clip_id, LYRICS) if r.lyrics is not None else None,
                )
                for r in records
                if r.clip_id not in failures
            ),
            lines_max=lines_max,
            words_max=words_max,
            root=manifest_path.parent,
            embeddings=provenance,
        )
        manifest_changed = manifest.write(manifest_path)
        self.cache.flush()
        self.cache.record_failures(failures)

        summary = FeaturizeSummary(
            manifest_path=manifest_path,
            records=len(manifest),
            written=written,
            skipped=skipped,
            grid=grid,
            failures=failures,
            embeddings=provenance,
        )
        self._logger.info(
            "featurize_finished",
            records=summary.records,
            written=written,
            skipped=skipped,
            failed=len(failures),
            lines_max=lines_max,
            words_max=words_max,
            manifest_changed=manifest_changed,
        )
        return summary
