"""Lyrics featurization: pre-trained word vectors laid out as a lines x words x dim tensor.

The embedding dimension is the channel axis; lines and words are the two
spatial axes seen by the text tower's 2D convolutions.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.exception import ConfigurationError, FormatError
from src.tensor import Tensor
from src.utils import get_logger, retry_on_exception
from .constants import EMBEDDING_DIM

logger = get_logger(__name__)

OOV_ZERO = "zero"

_NON_WORD = re.compile(r"[^\w\s']")

Lines = List[List[str]]


@dataclass(frozen=True)
class EmbeddingTable:
    vectors: Mapping[str, np.ndarray]
    dim: int = EMBEDDING_DIM
    oov_policy: str = OOV_ZERO
    skipped_lines: int = 0
    provenance: Optional[str] = None

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.vectors

    def lookup(self, token: str) -> Optional[np.ndarray]:
        return self.vectors.get(token.lower())


@dataclass(frozen=True)
class LyricsTensor:
    tensor: Tensor     # [L, W, dim]
    mask: np.ndarray = field(repr=False)  # [L, W], True where a real token sits

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.tensor.shape


@retry_on_exception(exception_types=(OSError,))
def load_embeddings(
    path: Union[str, Path],
    dim: int = EMBEDDING_DIM,
    provenance: Optional[str] = None,
) -> EmbeddingTable:
    """Parse 'token v1 ... v_dim' lines; malformed lines are counted and skipped."""
    path = Path(path)
    vectors = {}
    skipped = 0
    with path.open("r", encoding="utf-8", errors="replace") as handle:
        for line in handle:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != dim + 1:
                skipped += 1
                continue
            try:
                vector = np.asarray(parts[1:], dtype=np.float64)
            except ValueError:
                skipped += 1
                continue
            if not np.isfinite(vector).all():
                skipped += 1
                continue
            vector.setflags(write=False)
            vectors.setdefault(parts[0].lower(), vector)

    if not vectors:
        raise FormatError(f"no valid {dim}-dimensional vectors found", file_name=str(path))

    logger.info("embeddings_loaded", path=str(path), tokens=len(vectors), skipped_lines=skipped, dim=dim)
    return EmbeddingTable(
        vectors=MappingProxyType(vectors),
        dim=dim,
        skipped_lines=skipped,
        provenance=provenance,
    )


def tokenize(text: str) -> Lines:
    """One token list per non-empty line; lowercase, punctuation other than apostrophes removed."""
    lines: Lines = []
    for raw in text.splitlines():
        tokens = _NON_WORD.sub("", raw.lower()).split()
        if tokens:
            lines.append(tokens)
    return lines


def corpus_grid(songs: Iterable[Sequence[Sequence[str]]]) -> Tuple[int, int]:
    """(max line count, max words per line) over a corpus; each at least 1."""
    lines_max, words_max = 1, 1
    for lines in songs:
        lines_max = max(lines_max, len(lines))
        for line in lines:
            words_max = max(words_max, len(line))
    return lines_max, words_max


def build_lyrics_tensor(
    lines: Sequence[Sequence[str]],
    table: EmbeddingTable,
    words_max: int,
    lines_max: int,
) -> LyricsTensor:
    """Place token w of line l at (l, w); OOV tokens and padding stay zero, overflow is truncated."""
    if words_max < 1 or lines_max < 1:
        raise ConfigurationError(
            f"text grid must be at least 1x1, got lines_max={lines_max}, words_max={words_max}",
            config_key="model.lines_max",
        )
    values = np.zeros((lines_max, words_max, table.dim), dtype=np.float64)
    mask = np.zeros((lines_max, words_max), dtype=bool)
    for l, line in enumerate(lines[:lines_max]):
        for w, token in enumerate(line[:words_max]):
            mask[l, w] = True
            vector = table.lookup(token)
            if vector is not None:
                values[l, w] = vector
    mask.setflags(write=False)
    return LyricsTensor(tensor=Tensor.from_array(values), mask=mask)
