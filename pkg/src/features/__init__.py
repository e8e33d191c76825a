from .constants import (
    SAMPLE_RATE,
    CLIP_SAMPLES,
    N_FFT,
    HOP_LENGTH,
    N_MELS,
    FMIN,
    FMAX,
    EMBEDDING_DIM,
    MEL_SUFFIX,
    LYRICS_SUFFIX,
    frame_count,
)
from .audio import (
    AudioClip,
    MelFilterbank,
    MelSpectrogram,
    hz_to_mel,
    read_wav,
    standardize,
    stft_power,
    mel_filterbank,
    mel_power,
    mel_spectrogram,
)
from .text import (
    EmbeddingTable,
    LyricsTensor,
    load_embeddings,
    tokenize,
    corpus_grid,
    build_lyrics_tensor,
)

__all__ = [
    "SAMPLE_RATE",
    "CLIP_SAMPLES",
    "N_FFT",
    "HOP_LENGTH",
    "N_MELS",
    "FMIN",
    "FMAX",
    "EMBEDDING_DIM",
    "MEL_SUFFIX",
    "LYRICS_SUFFIX",
    "frame_count",
    "AudioClip",
    "MelFilterbank",
    "MelSpectrogram",
    "hz_to_mel",
    "read_wav",
    "standardize",
    "stft_power",
    "mel_filterbank",
    "mel_power",
    "mel_spectrogram",
    "EmbeddingTable",
    "LyricsTensor",
    "load_embeddings",
    "tokenize",
    "corpus_grid",
    "build_lyrics_tensor",
]
