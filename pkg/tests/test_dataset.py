import json

import pytest

from src.core.models import Modality, MoodCluster, Split
from src.core.schemas import EmbeddingsProvenance
from src.exception import FormatError, ValidationError
from src.training import DatasetManifest, ManifestRecord

HEADER = json.dumps({"lines_max": 8, "words_max": 6})


def write(path, *rows):
    path.write_text("\n".join([HEADER, *map(json.dumps, rows)]) + "\n")
    return path


def test_parse(tmp_path):
    path = write(
        tmp_path / "m.jsonl",
        {"clip_id": "a", "label": "III", "split": "val", "audio_feat": "a.mel.mnt"},
        {"clip_id": "b", "label": "I"},
    )
    manifest = DatasetManifest.load(path)
    assert manifest.grid == (8, 6)
    assert manifest.labels == [2, 0]
    assert manifest.records[1].split is Split.TRAIN
    assert manifest.resolve("a.mel.mnt") == tmp_path / "a.mel.mnt"
    assert [r.clip_id for r in manifest.subset(Split.VAL)] == ["a"]
    assert len(manifest.subset(None)) == 2


@pytest.mark.parametrize(
    "row, error",
    [
        ({"clip_id": "a", "label": "VI"}, ValidationError),
        ({"clip_id": "a", "label": "I", "split": "test"}, ValidationError),
        ({"label": "I"}, ValidationError),
        (["not", "an", "object"], FormatError),
        ({"clip_id": "a", "label": "I", "audio_feat": 3}, ValidationError),
        ({"clip_id": "a", "label": "I", "lyric_feat": "a.lyr.mnt"}, ValidationError),
    ],
)
def test_bad_records(tmp_path, row, error):
    with pytest.raises(error):
        DatasetManifest.load(write(tmp_path / "m.jsonl", row))


def test_bad_header(tmp_path):
    path = tmp_path / "m.jsonl"
    path.write_text(json.dumps({"clip_id": "a", "label": "I"}) + "\n")
    with pytest.raises(FormatError):
        DatasetManifest.load(path)
    path.write_text("{broken\n")
    with pytest.raises(FormatError):
        DatasetManifest.load(path)


def test_duplicate_clip_ids(tmp_path):
    with pytest.raises(ValidationError):
        DatasetManifest.load(write(tmp_path / "m.jsonl", {"clip_id": "a", "label": "I"}, {"clip_id": "a", "label": "II"}))


def test_missing_feature_files(tmp_path):
    path = write(tmp_path / "m.jsonl", {"clip_id": "a", "label": "I", "audio_feat": "a.mel.mnt"})
    DatasetManifest.load(path)
    with pytest.raises(ValidationError) as exc:
        DatasetManifest.load(path, modalities=[Modality.AUDIO])
    assert exc.value.details["missing"] == ["a:audio"]


def test_write_only_when_changed(tmp_path):
    manifest = DatasetManifest(
        records=(ManifestRecord(clip_id="a", label=MoodCluster.IV, lyrics_feat="a.lyr.mnt"),),
        lines_max=8,
        words_max=6,
    )
    path = tmp_path / "m.jsonl"
    assert manifest.write(path)
    assert not manifest.write(path)
    loaded = DatasetManifest.load(path)
    assert loaded.records == manifest.records


@pytest.mark.parametrize("header", [{"lines_max": 0, "words_max": 6}, {"lines_max": 8}, ["lines_max", 8]])
def test_header_needs_a_positive_grid(tmp_path, header):
    path = tmp_path / "m.jsonl"
    path.write_text(json.dumps(header) + "\n")
    with pytest.raises(FormatError):
        DatasetManifest.load(path)


def test_embedding_provenance_round_trip(tmp_path):
    provenance = EmbeddingsProvenance(file="vectors.txt", sha256="ab" * 32, source="6B-token corpus")
    manifest = DatasetManifest(records=(), lines_max=8, words_max=6, embeddings=provenance)
    path = tmp_path / "m.jsonl"
    manifest.write(path)
    assert json.loads(path.read_text().splitlines()[0])["embeddings"]["file"] == "vectors.txt"
    assert DatasetManifest.load(path).embeddings == provenance
    assert "embeddings" not in DatasetManifest(records=(), lines_max=8, words_max=6).dumps()
