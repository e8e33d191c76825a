import numpy as np
import pytest

from src.exception import ConfigurationError, FormatError
from src.features import build_lyrics_tensor, corpus_grid, load_embeddings, tokenize


@pytest.fixture
def table(tmp_path):
    path = tmp_path / "vectors.txt"
    path.write_text(
        "love 1 0 0\n"
        "night 0 1 0\n"
        "broken 1 2\n"          # wrong width
        "fire 0 0 x\n"          # not a number
        "\n"
        "Rain 0 0 1\n"
        "love 9 9 9\n",         # duplicate, first one wins
        encoding="utf-8",
    )
    return load_embeddings(path, dim=3)


def test_malformed_lines_skipped_and_counted(table):
    assert len(table) == 3
    assert table.skipped_lines == 2
    np.testing.assert_array_equal(table.lookup("love"), [1.0, 0.0, 0.0])
    assert "rain" in table
    assert "RAIN" in table


def test_no_valid_vectors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("word 1 2\n", encoding="utf-8")
    with pytest.raises(FormatError):
        load_embeddings(path, dim=3)


def test_tokenize():
    text = "Love, in the NIGHT!\n\n  don't   stop  \n...\n"
    assert tokenize(text) == [["love", "in", "the", "night"], ["don't", "stop"]]


def test_tokenize_is_idempotent():
    lines = tokenize("Hey! Jude,\tdon't make it BAD.\n\n(take a sad song)\n")
    assert tokenize("\n".join(" ".join(line) for line in lines)) == lines


def test_corpus_grid_takes_maxima():
    short = [["a"] * 3] * 7
    long = [["b"] * 5] + [["c"]] * 19
    assert corpus_grid([short, long]) == (20, 5)
    assert corpus_grid([]) == (1, 1)


def test_tensor_layout(table):
    lines = [["love", "unknown", "night"], ["rain"]]
    lyrics = build_lyrics_tensor(lines, table, words_max=4, lines_max=3)
    values = lyrics.tensor.array
    assert lyrics.shape == (3, 4, 3)
    np.testing.assert_array_equal(values[0, 0], [1, 0, 0])
    np.testing.assert_array_equal(values[0, 1], [0, 0, 0])
    np.testing.assert_array_equal(values[0, 2], [0, 1, 0])
    np.testing.assert_array_equal(values[1, 0], [0, 0, 1])
    assert values[2].sum() == 0.0
    assert lyrics.mask.sum() == 4
    assert lyrics.mask[0, 1]


def test_overflow_is_truncated(table):
    lines = [["love"] * 6] * 5
    lyrics = build_lyrics_tensor(lines, table, words_max=2, lines_max=3)
    assert lyrics.shape == (3, 2, 3)
    assert lyrics.mask.all()


def test_grid_must_be_positive(table):
    with pytest.raises(ConfigurationError):
        build_lyrics_tensor([["love"]], table, words_max=0, lines_max=3)
