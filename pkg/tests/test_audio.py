import numpy as np
import pytest
import soundfile as sf

from src.exception import ConfigurationError, InputError
from src.features import (
    CLIP_SAMPLES,
    SAMPLE_RATE,
    AudioClip,
    frame_count,
    hz_to_mel,
    mel_filterbank,
    mel_power,
    mel_spectrogram,
    read_wav,
    standardize,
    stft_power,
)


def tone(freq: float, seconds: float, sr: int = SAMPLE_RATE, amplitude: float = 0.5) -> AudioClip:
    t = np.arange(int(seconds * sr)) / sr
    return AudioClip(samples=amplitude * np.sin(2 * np.pi * freq * t), sample_rate=sr)


def test_full_clip_gives_1366_frames():
    assert CLIP_SAMPLES == 349_440
    assert frame_count(CLIP_SAMPLES) == 1366


def test_full_clip_spectrogram_shape_and_range():
    clip = standardize(tone(440.0, 29.12))
    spec = mel_spectrogram(clip)
    assert spec.shape == (96, 1366, 1)
    assert spec.tensor.min() == 0.0
    assert spec.tensor.max() == 1.0


def test_silence_is_all_zeros():
    clip = AudioClip(samples=np.zeros(16128), sample_rate=SAMPLE_RATE)
    spec = mel_spectrogram(clip, mel_filterbank(n_mels=24))
    assert spec.shape == (24, frame_count(16128), 1)
    assert spec.tensor.max() == 0.0


def test_tone_lands_in_its_mel_band():
    bank = mel_filterbank()
    energy = mel_power(tone(1000.0, 2.0), bank).mean(axis=1)
    band = int(np.argmax(energy))
    edges = bank.edges_hz
    assert abs(edges[band + 1] - 1000.0) < edges[band + 2] - edges[band]


def test_tone_power_peaks_between_bins_42_and_43():
    # 1000 Hz sits at bin 1000 * 512 / 12000 = 42.67
    power = stft_power(tone(1000.0, 1.0)).array.mean(axis=1)
    assert power.shape == (257,)
    assert int(np.argmax(power)) in (42, 43)
    assert (power[42] + power[43]) / power.sum() > 0.9


def test_white_noise_reaches_every_mel_band(rng):
    clip = AudioClip(samples=0.1 * rng.normal(size=SAMPLE_RATE), sample_rate=SAMPLE_RATE)
    bank = mel_filterbank()
    assert bank.weights.shape == (96, 257)
    assert np.all(mel_power(clip, bank).mean(axis=1) > 0.0)
    # every bin strictly between 0 Hz and 6 kHz feeds some band
    assert np.all(bank.weights[:, 1:256].sum(axis=0) > 0.0)


def test_filterbank_rows_peak_at_one():
    bank = mel_filterbank(n_mels=40)
    assert bank.weights.shape == (40, 257)
    np.testing.assert_allclose(bank.weights.max(axis=1), 1.0)
    assert len(bank.edges_hz) == 42
    assert bank.edges_hz[0] == pytest.approx(0.0)
    assert bank.edges_hz[-1] == pytest.approx(6000.0)


def test_hz_to_mel_formula():
    assert hz_to_mel(700.0) == pytest.approx(2595 * np.log10(2.0))
    assert hz_to_mel(1000.0) == pytest.approx(1000.0, abs=0.05)


def test_filterbank_rejects_bad_range():
    with pytest.raises(ConfigurationError):
        mel_filterbank(fmin=100.0, fmax=7000.0)


class TestStandardize:
    def test_resample_and_pad(self):
        clip = standardize(tone(440.0, 1.0, sr=16_000), n_samples=16128)
        assert clip.sample_rate == SAMPLE_RATE
        assert clip.samples.size == 16128
        assert np.all(clip.samples[12_000:] == 0.0)
        assert np.abs(clip.samples[:12_000]).max() > 0.4

    def test_center_trim(self):
        samples = np.arange(100, dtype=float)
        clip = standardize(AudioClip(samples=samples, sample_rate=SAMPLE_RATE), n_samples=40)
        np.testing.assert_array_equal(clip.samples, samples[30:70])

    def test_empty_signal(self):
        with pytest.raises(InputError):
            standardize(AudioClip(samples=np.zeros(0), sample_rate=SAMPLE_RATE))

    def test_low_sample_rate(self):
        with pytest.raises(InputError):
            standardize(AudioClip(samples=np.zeros(100), sample_rate=4000))


class TestReadWav:
    def test_pcm16_mono(self, tmp_path):
        path = tmp_path / "a.wav"
        sf.write(str(path), np.linspace(-0.5, 0.5, 400), 16_000, subtype="PCM_16")
        clip = read_wav(path)
        assert clip.sample_rate == 16_000
        assert clip.samples.shape == (400,)
        assert np.abs(clip.samples).max() <= 1.0

    def test_stereo_rejected(self, tmp_path):
        path = tmp_path / "stereo.wav"
        sf.write(str(path), np.zeros((400, 2)), 16_000, subtype="PCM_16")
        with pytest.raises(InputError):
            read_wav(path)

    def test_24_bit_rejected(self, tmp_path):
        path = tmp_path / "deep.wav"
        sf.write(str(path), np.zeros(400), 16_000, subtype="PCM_24")
        with pytest.raises(InputError):
            read_wav(path)

    def test_not_audio(self, tmp_path):
        path = tmp_path / "junk.wav"
        path.write_bytes(b"definitely not a wav file")
        with pytest.raises(InputError):
            read_wav(path)
