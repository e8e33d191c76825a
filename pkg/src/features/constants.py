"""Featurization constants shared by the extractors and the configuration layer."""

SAMPLE_RATE = 12_000
# 29.12 s: with hop 256 and a centered STFT this gives exactly 1366 frames
CLIP_SAMPLES = 349_440
N_FFT = 512
HOP_LENGTH = 256
N_MELS = 96
FMIN = 0.0
FMAX = 6_000.0
MIN_SAMPLE_RATE = 8_000
LOG_FLOOR = 1e-10

EMBEDDING_DIM = 100

MEL_SUFFIX = ".mel.mnt"
LYRICS_SUFFIX = ".lyr.mnt"


def frame_count(n_samples: int, hop_length: int = HOP_LENGTH) -> int:
    """Frames of a centered STFT."""
    return n_samples // hop_length + 1
