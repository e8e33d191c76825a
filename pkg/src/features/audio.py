"""Log-amplitude mel-spectrogram extraction.

Pipeline: 16-bit PCM WAV -> linear-interpolation resample to 12 kHz ->
center trim / tail zero-pad to 29.12 s -> Hann STFT (nfft 512, hop 256,
centered, reflect padding) -> 96 peak-normalised triangular mel filters ->
10*log10(max(S, 1e-10)) -> per-clip min-max scaling to [0, 1].
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import librosa
import numpy as np
import soundfile as sf

from src.exception import ConfigurationError, InputError
from src.tensor import Tensor
from src.utils import get_logger, retry_on_exception
from .constants import (
    CLIP_SAMPLES,
    FMAX,
    FMIN,
    HOP_LENGTH,
    LOG_FLOOR,
    MIN_SAMPLE_RATE,
    N_FFT,
    N_MELS,
    SAMPLE_RATE,
)

logger = get_logger(__name__)

WAV_SUBTYPE = "PCM_16"


@dataclass(frozen=True)
class AudioClip:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        if np.ndim(self.samples) != 1:
            raise InputError(f"audio must be mono, got array of shape {np.shape(self.samples)}")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class MelFilterbank:
    weights: np.ndarray   # [n_mels, n_fft // 2 + 1]
    edges_hz: np.ndarray  # n_mels + 2 band edges

    @property
    def n_mels(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class MelSpectrogram:
    tensor: Tensor  # [n_mels, frames, 1]

    @property
    def shape(self):
        return self.tensor.shape


def hz_to_mel(hz: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """m = 2595 * log10(1 + f / 700)."""
    return librosa.hz_to_mel(hz, htk=True)


@retry_on_exception(exception_types=(OSError,))
def read_wav(path: Union[str, Path]) -> AudioClip:
    """Load a mono 16-bit PCM WAV with samples scaled to [-1, 1]."""
    path = Path(path)
    try:
        info = sf.info(str(path))
    except sf.LibsndfileError as exc:
        raise InputError(f"unreadable audio file: {exc}", source=str(path)) from exc
    if info.format != "WAV" or info.subtype != WAV_SUBTYPE:
        raise InputError(
            f"expected 16-bit PCM WAV, got {info.format}/{info.subtype}",
            source=str(path),
        )
    if info.channels != 1:
        raise InputError(f"expected mono audio, got {info.channels} channels", source=str(path))
    samples, sample_rate = sf.read(str(path), dtype="float64", always_2d=False)
    return AudioClip(samples=samples, sample_rate=int(sample_rate))


def standardize(
    clip: AudioClip,
    sample_rate: int = SAMPLE_RATE,
    n_samples: int = CLIP_SAMPLES,
) -> AudioClip:
    """Resample to the target rate by linear interpolation, then fix the length."""
    if clip.samples.size == 0:
        raise InputError("empty audio signal")
    if clip.sample_rate < MIN_SAMPLE_RATE:
        raise InputError(f"sample rate {clip.sample_rate} Hz is below {MIN_SAMPLE_RATE} Hz")

    samples = np.asarray(clip.samples, dtype=np.float64)
    if clip.sample_rate != sample_rate:
        n_out = max(1, int(round(samples.size * sample_rate / clip.sample_rate)))
        positions = np.arange(n_out) * (clip.sample_rate / sample_rate)
        samples = np.interp(positions, np.arange(samples.size), samples)

    if samples.size > n_samples:
        start = (samples.size - n_samples) // 2
        samples = samples[start:start + n_samples]
    elif samples.size < n_samples:
        samples = np.pad(samples, (0, n_samples - samples.size))

    return AudioClip(samples=np.ascontiguousarray(samples), sample_rate=sample_rate)


def stft_power(clip: AudioClip, n_fft: int = N_FFT, hop_length: int = HOP_LENGTH) -> Tensor:
    """|STFT|^2 with shape [n_fft // 2 + 1, len // hop + 1]."""
    spectrum = librosa.stft(
        clip.samples,
        n_fft=n_fft,
        hop_length=hop_length,
        window="hann",
        center=True,
        pad_mode="reflect",
    )
    return Tensor.from_array(np.abs(spectrum) ** 2)


def mel_filterbank(
    n_mels: int = N_MELS,
    n_fft: int = N_FFT,
    sr: int = SAMPLE_RATE,
    fmin: float = FMIN,
    fmax: float = FMAX,
) -> MelFilterbank:
    """Triangles over consecutive mel-spaced edges (i, i+1, i+2), each scaled to peak 1."""
    if n_mels < 1:
        raise ConfigurationError(f"n_mels must be >= 1, got {n_mels}", config_key="features.n_mels")
    if not 0 <= fmin < fmax <= sr / 2:
        raise ConfigurationError(
            f"need 0 <= fmin < fmax <= sr/2, got fmin={fmin}, fmax={fmax}, sr={sr}",
            config_key="features.fmax",
        )

    weights = librosa.filters.mel(
        sr=sr, n_fft=n_fft, n_mels=n_mels, fmin=fmin, fmax=fmax,
        htk=True, norm=None, dtype=np.float64,
    )
    peaks = weights.max(axis=1, keepdims=True)
    if np.any(peaks <= 0):
        raise ConfigurationError(
            f"{int(np.sum(peaks <= 0))} mel bands contain no FFT bin; raise n_fft or lower n_mels",
            config_key="features.n_mels",
        )
    edges = librosa.mel_frequencies(n_mels=n_mels + 2, fmin=fmin, fmax=fmax, htk=True)
    return MelFilterbank(weights=weights / peaks, edges_hz=edges)


def mel_power(clip: AudioClip, filterbank: MelFilterbank, n_fft: int = N_FFT, hop_length: int = HOP_LENGTH) -> np.ndarray:
    """Filterbank applied to the power STFT, before the log."""
    return filterbank.weights @ stft_power(clip, n_fft=n_fft, hop_length=hop_length).array


def mel_spectrogram(
    clip: AudioClip,
    filterbank: Optional[MelFilterbank] = None,
    n_fft: int = N_FFT,
    hop_length: int = HOP_LENGTH,
) -> MelSpectrogram:
    """Min-max scaled log-amplitude mel-spectrogram, shape [n_mels, frames, 1]."""
    if filterbank is None:
        filterbank = mel_filterbank(n_fft=n_fft, sr=clip.sample_rate)
    log_mel = librosa.power_to_db(
        mel_power(clip, filterbank, n_fft=n_fft, hop_length=hop_length),
        ref=1.0,
        amin=LOG_FLOOR,
        top_db=None,
    )
    lo, hi = float(log_mel.min()), float(log_mel.max())
    if hi > lo:
        scaled = (log_mel - lo) / (hi - lo)
    else:
        scaled = np.zeros_like(log_mel)
    return MelSpectrogram(tensor=Tensor.from_array(scaled[..., np.newaxis]))
