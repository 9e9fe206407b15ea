"""Log-mel spectrogram extraction for the emotion classifier.

The pipeline per frame: Hamming window -> zero-pad to the FFT size -> one
sided FFT -> power spectrum -> triangular mel filterbank -> natural log with
an additive floor. Output is padded or truncated to a fixed number of frames
so the downstream network always sees the same shape.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace

import numpy as np

from .audio_io import AudioClip
from .errors import (
    CacheFormatError,
    EmptyClip,
    NonPowerOfTwoSize,
    SampleRateMismatch,
    ShapeMismatch,
    TooFewBins,
)


@dataclass(frozen=True)
class FeatureConfig:
    """Framing, FFT, and mel-filterbank parameters.

    Defaults: 16 kHz audio, 25 ms frames every 10 ms, 512-point FFT, 64 mel
    bands over the full band, and a 3 s (300-frame) analysis window.
    """

    sample_rate: int = 16000
    frame_length: int = 400
    hop_length: int = 160
    fft_size: int = 512
    n_mels: int = 64
    f_min: float = 0.0
    f_max: float | None = None
    target_frames: int = 300
    log_floor: float = 1e-10

    def __post_init__(self):
        if self.f_max is None:
            object.__setattr__(self, "f_max", self.sample_rate / 2)
        if self.frame_length > self.fft_size:
            raise ValueError("frame_length must not exceed fft_size")
        if self.fft_size < 2 or (self.fft_size & (self.fft_size - 1)) != 0:
            raise ValueError("fft_size must be a power of two")
        if self.hop_length < 1:
            raise ValueError("hop_length must be at least 1")
        if not self.f_min < self.f_max <= self.sample_rate / 2:
            raise ValueError("need f_min < f_max <= sample_rate/2")
        if self.n_mels < 2:
            raise ValueError("n_mels must be at least 2")
        if self.target_frames < 1:
            raise ValueError("target_frames must be at least 1")

    def as_vector(self) -> np.ndarray:
        """Numeric encoding used inside checkpoints."""
        return np.array(
            [
                self.sample_rate,
                self.frame_length,
                self.hop_length,
                self.fft_size,
                self.n_mels,
                self.f_min,
                self.f_max,
                self.target_frames,
                self.log_floor,
            ],
            dtype=np.float64,
        )

    @staticmethod
    def from_vector(vec: np.ndarray) -> "FeatureConfig":
        if vec.shape != (9,):
            raise ShapeMismatch("feature config vector must have 9 entries")
        return FeatureConfig(
            sample_rate=int(vec[0]),
            frame_length=int(vec[1]),
            hop_length=int(vec[2]),
            fft_size=int(vec[3]),
            n_mels=int(vec[4]),
            f_min=float(vec[5]),
            f_max=float(vec[6]),
            target_frames=int(vec[7]),
            log_floor=float(vec[8]),
        )


@dataclass(frozen=True)
class MelSpectrogram:
    """Fixed-shape matrix of log mel energies (target_frames x n_mels)."""

    values: np.ndarray
    config: FeatureConfig = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))


def hamming_window(n: int) -> np.ndarray:
    """w[k] = 0.54 - 0.46 cos(2 pi k / (n - 1)); [1.0] for n = 1."""
    if n < 1:
        raise ValueError("window length must be at least 1")
    if n == 1:
        return np.ones(1)
    k = np.arange(n)
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * k / (n - 1))


def frame_signal(samples: np.ndarray, frame_length: int, hop_length: int) -> np.ndarray:
    """Slice a signal into overlapping frames, zero-padding the final one.

    Frame i covers [i*hop, i*hop + frame_length). Nonempty input yields
    ceil(max(len - frame_length, 0) / hop) + 1 frames; empty input yields 0.
    """
    if hop_length < 1:
        raise ValueError("hop_length must be at least 1")
    samples = np.asarray(samples, dtype=np.float64)
    n = len(samples)
    if n == 0:
        return np.zeros((0, frame_length))
    n_frames = int(np.ceil(max(n - frame_length, 0) / hop_length)) + 1
    frames = np.zeros((n_frames, frame_length))
    for i in range(n_frames):
        start = i * hop_length
        chunk = samples[start : start + frame_length]
        frames[i, : len(chunk)] = chunk
    return frames


def fft_real(frame: np.ndarray) -> np.ndarray:
    """One-sided unnormalized DFT of a real frame (length fft_size/2 + 1).

    X[k] = sum_t x[t] exp(-2 pi i k t / N). Length must be a power of two.
    """
    frame = np.asarray(frame, dtype=np.float64)
    n = len(frame)
    if n < 1 or (n & (n - 1)) != 0:
        raise NonPowerOfTwoSize(f"FFT length {n} is not a power of two")
    return np.fft.rfft(frame)


def power_spectrum(spectrum: np.ndarray) -> np.ndarray:
    """Elementwise squared magnitude |X[k]|^2."""
    spectrum = np.asarray(spectrum)
    return (spectrum.real**2 + spectrum.imag**2).astype(np.float64)


def hz_to_mel(f):
    """HTK mel scale: m = 2595 log10(1 + f/700)."""
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    """Inverse of hz_to_mel."""
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(config: FeatureConfig) -> np.ndarray:
    """Triangular mel filters as a matrix (n_mels x fft_size/2 + 1).

    Filter centers sit at n_mels + 2 mel-equally-spaced points between f_min
    and f_max, quantized to strictly increasing FFT bins, so every filter
    peaks at exactly 1.0 at its center bin.
    """
    n_bins = config.fft_size // 2 + 1
    n_points = config.n_mels + 2
    if n_bins < n_points:
        raise TooFewBins(
            f"{n_bins} FFT bins cannot host {n_points} distinct filter center bins"
        )
    mel_points = np.linspace(hz_to_mel(config.f_min), hz_to_mel(config.f_max), n_points)
    hz_points = mel_to_hz(mel_points)
    bin_width = config.sample_rate / config.fft_size
    bins = np.rint(hz_points / bin_width).astype(int)
    # force strict monotonicity; narrow low-frequency filters may otherwise
    # quantize onto the same bin
    for i in range(1, n_points):
        if bins[i] <= bins[i - 1]:
            bins[i] = bins[i - 1] + 1
    if bins[-1] > config.fft_size // 2:
        raise TooFewBins("filter center bins exceed the FFT range after separation")

    bank = np.zeros((config.n_mels, n_bins))
    for m in range(config.n_mels):
        left, center, right = bins[m], bins[m + 1], bins[m + 2]
        for k in range(left, center):
            bank[m, k] = (k - left) / (center - left)
        for k in range(center, right):
            bank[m, k] = (right - k) / (right - center)
    return bank


def filter_center_frequencies(config: FeatureConfig) -> np.ndarray:
    """Center frequency (Hz) of each mel filter, as realized on the FFT grid."""
    bank = mel_filterbank(config)
    centers = np.argmax(bank, axis=1)
    return centers * (config.sample_rate / config.fft_size)


def pad_or_truncate(rows: np.ndarray, config: FeatureConfig) -> np.ndarray:
    """Fix the frame count: pad with log(log_floor) rows or keep the first
    target_frames rows."""
    fill = np.log(config.log_floor)
    n = len(rows)
    if n >= config.target_frames:
        return rows[: config.target_frames]
    out = np.full((config.target_frames, config.n_mels), fill)
    out[:n] = rows
    return out


def log_mel_spectrogram(clip: AudioClip, config: FeatureConfig) -> MelSpectrogram:
    """Extract the fixed-shape log-mel feature matrix from a clip.

    The caller resamples first: the clip's rate must equal config.sample_rate.
    """
    if clip.sample_rate != config.sample_rate:
        raise SampleRateMismatch(
            f"clip at {clip.sample_rate} Hz, config expects {config.sample_rate} Hz"
        )
    if len(clip.samples) == 0:
        raise EmptyClip("cannot extract features from an empty clip")

    frames = frame_signal(clip.samples, config.frame_length, config.hop_length)
    window = hamming_window(config.frame_length)
    bank = mel_filterbank(config)

    padded = np.zeros((len(frames), config.fft_size))
    padded[:, : config.frame_length] = frames * window
    spectra = np.fft.rfft(padded, axis=1)
    power = spectra.real**2 + spectra.imag**2
    energies = power @ bank.T
    rows = np.log(energies + config.log_floor)
    return MelSpectrogram(values=pad_or_truncate(rows, config), config=config)


@dataclass(frozen=True)
class FeatureStats:
    """Per-band mean and standard deviation from a training set."""

    mean: np.ndarray
    std: np.ndarray

    @staticmethod
    def identity(n_mels: int) -> "FeatureStats":
        return FeatureStats(mean=np.zeros(n_mels), std=np.ones(n_mels))


def compute_feature_stats(specs: list[MelSpectrogram]) -> FeatureStats:
    """Population mean/std per mel band over every frame of every spectrogram."""
    if not specs:
        raise ValueError("need at least one spectrogram")
    stacked = np.concatenate([s.values for s in specs], axis=0)
    return FeatureStats(mean=stacked.mean(axis=0), std=stacked.std(axis=0))


def normalize_features(spec: MelSpectrogram, stats: FeatureStats) -> MelSpectrogram:
    """(value - mean) / std per band; bands with zero std divide by 1."""
    n_mels = spec.values.shape[1]
    if stats.mean.shape != (n_mels,) or stats.std.shape != (n_mels,):
        raise ShapeMismatch("stats dimensions do not match the spectrogram bands")
    std = np.where(stats.std == 0.0, 1.0, stats.std)
    return MelSpectrogram(values=(spec.values - stats.mean) / std, config=spec.config)


# Feature cache: "EMPF" magic, version, target_frames, n_mels (LE u32 each),
# then row-major float32 matrices back to back.

_CACHE_MAGIC = b"EMPF"
_CACHE_VERSION = 1


def save_feature_cache(path: str, specs: list[MelSpectrogram], config: FeatureConfig) -> None:
    """Write spectrogram matrices as float32 so training can skip extraction."""
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<III", _CACHE_VERSION, config.target_frames, config.n_mels))
        for spec in specs:
            if spec.values.shape != (config.target_frames, config.n_mels):
                raise ShapeMismatch("spectrogram shape disagrees with the cache config")
            fh.write(spec.values.astype("<f4").tobytes())


def load_feature_cache(path: str, config: FeatureConfig) -> list[MelSpectrogram]:
    """Read matrices written by save_feature_cache; validates header and size."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 16 or blob[:4] != _CACHE_MAGIC:
        raise CacheFormatError("not a feature cache file")
    version, frames, mels = struct.unpack_from("<III", blob, 4)
    if version != _CACHE_VERSION:
        raise CacheFormatError(f"unsupported cache version {version}")
    if frames != config.target_frames or mels != config.n_mels:
        raise CacheFormatError(
            f"cache holds {frames}x{mels} features, config expects "
            f"{config.target_frames}x{config.n_mels}"
        )
    body = blob[16:]
    matrix_bytes = frames * mels * 4
    if matrix_bytes == 0 or len(body) % matrix_bytes != 0:
        raise CacheFormatError("cache body is not a whole number of matrices")
    count = len(body) // matrix_bytes
    out = []
    for i in range(count):
        chunk = body[i * matrix_bytes : (i + 1) * matrix_bytes]
        values = np.frombuffer(chunk, dtype="<f4").astype(np.float64).reshape(frames, mels)
        out.append(MelSpectrogram(values=values, config=config))
    return out
