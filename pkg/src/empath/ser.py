"""Speech emotion classifier: three conv stages over a log-mel spectrogram.

Topology: (1->16), (16->32), (32->64) channels, each a 3x3 same-padding
convolution + ReLU + 2x2 max-pool (odd spatial dims are cropped before
pooling), then a global average pool and a dense 64->6 output. With the
default 300x64 features the spatial grid shrinks 300->150->75->37 and
64->32->16->8.

Also here: the negative-emotion filter that gates recommendations, training
and evaluation, a synthetic band-profile dataset generator, and a loader for
ShEMO-style directories (emotion letter codes in file names).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

import numpy as np

from . import nn
from .audio_io import AudioClip, read_wav, resample_linear, write_wav
from .errors import CheckpointError, EmptyDataset, ShapeMismatch
from .features import (
    FeatureConfig,
    FeatureStats,
    MelSpectrogram,
    compute_feature_stats,
    filter_center_frequencies,
    log_mel_spectrogram,
    normalize_features,
)
from .nn.optim import AdamState, Params
from .rng import Rng


class Emotion(IntEnum):
    ANGER = 0
    FEAR = 1
    SADNESS = 2
    HAPPINESS = 3
    SURPRISE = 4
    NEUTRALITY = 5

    @property
    def label(self) -> str:
        return self.name.lower()


NEGATIVE_EMOTIONS = frozenset({Emotion.ANGER, Emotion.FEAR, Emotion.SADNESS})
EMOTION_NAMES = tuple(e.label for e in Emotion)

_STAGE_WIDTHS = ((1, 16), (16, 32), (32, 64))


@dataclass(frozen=True)
class EmotionDistribution:
    """Probability vector over the six emotions (sums to 1)."""

    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=np.float64)
        object.__setattr__(self, "probabilities", p)
        if p.shape != (6,):
            raise ShapeMismatch("emotion distribution needs exactly 6 entries")
        if not np.isfinite(p).all() or (p < 0).any() or abs(p.sum() - 1.0) > 1e-9:
            raise ValueError("probabilities must be finite, nonnegative, and sum to 1")

    @property
    def top(self) -> Emotion:
        # argmax ties break toward the lowest class index
        return Emotion(int(np.argmax(self.probabilities)))

    def as_dict(self) -> dict[str, float]:
        return {name: float(p) for name, p in zip(EMOTION_NAMES, self.probabilities)}


@dataclass
class SerModel:
    params: Params
    feature_config: FeatureConfig
    stats: FeatureStats

    def parameter_count(self) -> int:
        return sum(p.size for p in self.params.values())


@dataclass
class TrainConfig:
    epochs: int = 30
    batch_size: int = 16
    learning_rate: float = 1e-3
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")


@dataclass
class TrainReport:
    epoch_losses: list[float] = field(default_factory=list)
    epoch_accuracies: list[float] = field(default_factory=list)

    @property
    def final_accuracy(self) -> float:
        return self.epoch_accuracies[-1] if self.epoch_accuracies else 0.0

    def as_dict(self) -> dict:
        return {
            "epochs": [
                {"epoch": i + 1, "loss": loss, "accuracy": acc}
                for i, (loss, acc) in enumerate(zip(self.epoch_losses, self.epoch_accuracies))
            ],
            "final_accuracy": self.final_accuracy,
        }


def build_ser_model(seed: int, feature_config: FeatureConfig | None = None) -> SerModel:
    """Initialize the fixed topology with seeded Glorot-uniform weights."""
    config = feature_config if feature_config is not None else FeatureConfig()
    rng = Rng(seed).split("ser")
    params: Params = {}
    for idx, (c_in, c_out) in enumerate(_STAGE_WIDTHS, start=1):
        fan_in, fan_out = c_in * 9, c_out * 9
        params[f"conv{idx}.w"] = nn.glorot_uniform(
            rng.split(f"conv{idx}"), (c_out, c_in, 3, 3), fan_in, fan_out
        )
        params[f"conv{idx}.b"] = np.zeros(c_out)
    params["out.w"] = nn.glorot_uniform(rng.split("out"), (6, 64), 64, 6)
    params["out.b"] = np.zeros(6)
    return SerModel(
        params=params,
        feature_config=config,
        stats=FeatureStats.identity(config.n_mels),
    )


def _forward_logits(params: Params, features: np.ndarray, cache: list | None = None) -> np.ndarray:
    """Conv stack over a (H, W) feature matrix down to 6 logits.

    When `cache` is a list, per-stage activations are appended for the
    backward pass.
    """
    a = features[None, :, :]
    for idx in range(1, 4):
        w, b = params[f"conv{idx}.w"], params[f"conv{idx}.b"]
        pre = nn.conv2d_forward(a, w, b)
        act = nn.relu(pre)
        _, h, width = act.shape
        cropped = act[:, : h - h % 2, : width - width % 2]
        pooled, argmax = nn.maxpool2d_forward(cropped)
        if cache is not None:
            cache.append((a, pre, act, cropped.shape, argmax))
        a = pooled
    pooled_shape = a.shape
    gap = a.mean(axis=(1, 2))
    logits = nn.dense_forward(gap, params["out.w"], params["out.b"])
    if cache is not None:
        cache.append((pooled_shape, gap))
    return logits


def _backward(params: Params, grad_logits: np.ndarray, cache: list) -> Params:
    """Exact gradients of the forward map for one example."""
    grads: Params = {}
    pooled_shape, gap = cache[-1]
    grad_gap, grads["out.w"], grads["out.b"] = nn.dense_backward(
        grad_logits, gap, params["out.w"]
    )
    c, ph, pw = pooled_shape
    grad_pooled = np.broadcast_to(
        grad_gap[:, None, None] / (ph * pw), pooled_shape
    ).copy()

    for idx in range(3, 0, -1):
        a, pre, act, cropped_shape, argmax = cache[idx - 1]
        grad_cropped = nn.maxpool2d_backward(grad_pooled, argmax, cropped_shape)
        grad_act = np.zeros_like(act)
        grad_act[:, : cropped_shape[1], : cropped_shape[2]] = grad_cropped
        grad_pre = nn.relu_backward(grad_act, pre)
        grad_pooled, grads[f"conv{idx}.w"], grads[f"conv{idx}.b"] = nn.conv2d_backward(
            grad_pre, a, params[f"conv{idx}.w"]
        )
    return grads


def ser_forward(model: SerModel, spec: MelSpectrogram) -> EmotionDistribution:
    """Softmax distribution over the six emotions for a normalized spectrogram."""
    expected = (model.feature_config.target_frames, model.feature_config.n_mels)
    if spec.values.shape != expected:
        raise ShapeMismatch(f"spectrogram shape {spec.values.shape}, model expects {expected}")
    logits = _forward_logits(model.params, spec.values)
    return EmotionDistribution(probabilities=nn.softmax(logits))


def train_ser(
    model: SerModel, dataset: list[tuple[MelSpectrogram, Emotion]], config: TrainConfig
) -> TrainReport:
    """Mini-batch Adam on softmax cross-entropy; deterministic per seed."""
    if not dataset:
        raise EmptyDataset("SER training set is empty")
    state = AdamState(lr=config.learning_rate)
    rng = Rng(config.seed).split("ser-shuffle")
    report = TrainReport()

    order = list(range(len(dataset)))
    for _ in range(config.epochs):
        if config.shuffle:
            rng.shuffle(order)
        losses = []
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            grads_sum: Params = {k: np.zeros_like(v) for k, v in model.params.items()}
            batch_loss = 0.0
            for i in batch:
                spec, label = dataset[i]
                cache: list = []
                logits = _forward_logits(model.params, spec.values, cache)
                loss, grad_logits = nn.softmax_cross_entropy(logits, int(label))
                batch_loss += loss
                for name, g in _backward(model.params, grad_logits, cache).items():
                    grads_sum[name] += g
            scale = 1.0 / len(batch)
            grads = {k: v * scale for k, v in grads_sum.items()}
            nn.adam_update(model.params, grads, state)
            losses.append(batch_loss * scale)
        report.epoch_losses.append(float(np.mean(losses)))
        report.epoch_accuracies.append(evaluate_ser(model, dataset)["accuracy"])
    return report


def evaluate_ser(model: SerModel, dataset: list[tuple[MelSpectrogram, Emotion]]) -> dict:
    """Accuracy, per-class recall, and the 6x6 confusion matrix."""
    if not dataset:
        raise EmptyDataset("SER evaluation set is empty")
    confusion = np.zeros((6, 6), dtype=int)
    for spec, label in dataset:
        predicted = ser_forward(model, spec).top
        confusion[int(label), int(predicted)] += 1
    correct = int(np.trace(confusion))
    row_sums = confusion.sum(axis=1)
    recall = [
        float(confusion[i, i] / row_sums[i]) if row_sums[i] else 0.0 for i in range(6)
    ]
    return {
        "accuracy": correct / len(dataset),
        "per_class_recall": {EMOTION_NAMES[i]: recall[i] for i in range(6)},
        "confusion": confusion.tolist(),
    }


def filter_negative(dist: EmotionDistribution, threshold: float = 0.0) -> Emotion | None:
    """Return the argmax emotion only if it is negative and meets the threshold."""
    top = dist.top
    if top in NEGATIVE_EMOTIONS and dist.probabilities[int(top)] >= threshold:
        return top
    return None


# -- checkpointing ----------------------------------------------------------

def save_ser_checkpoint(path: str, model: SerModel) -> None:
    record = dict(model.params)
    record["feature_config"] = model.feature_config.as_vector()
    record["norm.mean"] = model.stats.mean
    record["norm.std"] = model.stats.std
    nn.save_checkpoint(path, "SER", record)


def load_ser_checkpoint(path: str) -> SerModel:
    kind, record = nn.load_checkpoint(path)
    if kind != "SER":
        raise CheckpointError(f"expected a SER checkpoint, found {kind}")
    try:
        config = FeatureConfig.from_vector(record.pop("feature_config"))
        stats = FeatureStats(mean=record.pop("norm.mean"), std=record.pop("norm.std"))
    except KeyError as missing:
        raise CheckpointError(f"checkpoint lacks record {missing}") from None
    return SerModel(params=record, feature_config=config, stats=stats)


# -- datasets ----------------------------------------------------------------

# ShEMO-style names: gender letter, 2-digit speaker, emotion letter, 2-digit take
_SHEMO_NAME = re.compile(r"^[MF]\d{2}([AFHNSW])\d{2}$")
_SHEMO_LETTERS = {
    "A": Emotion.ANGER,
    "F": Emotion.FEAR,
    "S": Emotion.SADNESS,
    "H": Emotion.HAPPINESS,
    "W": Emotion.SURPRISE,
    "N": Emotion.NEUTRALITY,
}
_LETTER_FOR_EMOTION = {v: k for k, v in _SHEMO_LETTERS.items()}


# (cluster count, cluster width in bands, per-tone amplitude) per class. The
# conv+pool+global-average stack is translation-invariant along the band
# axis, so classes are separated by statistics that survive that invariance:
# how many energy clusters, how wide, and how loud -- not where they sit.
_CLASS_PROFILES = {
    Emotion.ANGER: (1, 8, 0.08),
    Emotion.FEAR: (2, 4, 0.055),
    Emotion.SADNESS: (3, 2, 0.04),
    Emotion.HAPPINESS: (1, 3, 0.025),
    Emotion.SURPRISE: (2, 2, 0.015),
    Emotion.NEUTRALITY: (0, 0, 0.0),
}


def synth_emotion_clip(
    emotion: Emotion,
    rng: Rng,
    config: FeatureConfig | None = None,
    duration: float = 3.0,
) -> AudioClip:
    """Synthetic clip with a class-dependent band-energy profile plus noise.

    Each class lays down its own pattern of tone clusters on the mel grid
    (count, width, loudness) at positions randomized per clip; no resemblance
    to real emotional speech is intended.
    """
    config = config if config is not None else FeatureConfig()
    centers = filter_center_frequencies(config)
    n_clusters, width, amp = _CLASS_PROFILES[emotion]
    n = int(duration * config.sample_rate)
    t = np.arange(n) / config.sample_rate
    samples = rng.uniform(-0.01, 0.01, (n,))
    lo, hi = 4, config.n_mels - 4
    for c in range(n_clusters):
        seg_lo = lo + (hi - lo) * c // n_clusters
        seg_hi = lo + (hi - lo) * (c + 1) // n_clusters - width
        start = seg_lo + rng.next_u64() % max(seg_hi - seg_lo, 1)
        for band in range(start, start + width):
            phase = rng.next_float() * 2 * np.pi
            samples = samples + amp * np.sin(2 * np.pi * centers[band] * t + phase)
    return AudioClip(samples=np.clip(samples, -1.0, 1.0), sample_rate=config.sample_rate)


def make_synthetic_clips(
    n_per_class: int, seed: int, config: FeatureConfig | None = None
) -> list[tuple[AudioClip, Emotion]]:
    """Balanced synthetic clips across all six classes, deterministic per seed."""
    config = config if config is not None else FeatureConfig()
    base = Rng(seed).split("synthetic-dataset")
    out = []
    for emotion in Emotion:
        for i in range(n_per_class):
            rng = base.split(f"{emotion.label}-{i}")
            out.append((synth_emotion_clip(emotion, rng, config), emotion))
    return out


def write_synthetic_dataset(
    directory: str, n_per_class: int, seed: int, config: FeatureConfig | None = None
) -> list[Path]:
    """Write synthetic clips as ShEMO-style named WAV files; returns the paths."""
    config = config if config is not None else FeatureConfig()
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    counters = {e: 0 for e in Emotion}
    paths = []
    for clip, emotion in make_synthetic_clips(n_per_class, seed, config):
        counters[emotion] += 1
        take = counters[emotion]
        name = f"M{(take - 1) % 99 + 1:02d}{_LETTER_FOR_EMOTION[emotion]}{take:02d}.wav"
        path = target / name
        path.write_bytes(write_wav(clip))
        paths.append(path)
    return paths


def load_wav_dataset(directory: str) -> list[tuple[AudioClip, Emotion]]:
    """Load a ShEMO-style directory: WAV files labeled by emotion letter codes.

    Files whose names do not match the pattern are ignored. Results are in
    sorted file-name order so runs are reproducible.
    """
    out = []
    for path in sorted(Path(directory).glob("*.wav")):
        match = _SHEMO_NAME.match(path.stem)
        if not match:
            continue
        out.append((read_wav(path.read_bytes()), _SHEMO_LETTERS[match.group(1)]))
    if not out:
        raise EmptyDataset(f"no ShEMO-style WAV files under {directory}")
    return out


def extract_features(
    clips: list[tuple[AudioClip, Emotion]], config: FeatureConfig
) -> list[tuple[MelSpectrogram, Emotion]]:
    """Resample each clip to the config rate and extract raw (unnormalized) features."""
    out = []
    for clip, label in clips:
        if clip.sample_rate != config.sample_rate:
            clip = resample_linear(clip, config.sample_rate)
        out.append((log_mel_spectrogram(clip, config), label))
    return out


def prepare_ser_dataset(
    clips: list[tuple[AudioClip, Emotion]],
    config: FeatureConfig,
    stats: FeatureStats | None = None,
) -> tuple[list[tuple[MelSpectrogram, Emotion]], FeatureStats]:
    """Features + normalization for training (stats=None) or evaluation."""
    raw = extract_features(clips, config)
    if stats is None:
        stats = compute_feature_stats([spec for spec, _ in raw])
    normalized = [(normalize_features(spec, stats), label) for spec, label in raw]
    return normalized, stats
