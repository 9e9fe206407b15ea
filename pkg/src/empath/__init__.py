"""Emotion-aware speech pipeline.

A voice clip goes in; a six-way emotion classification comes out. Negative
emotions (anger, fear, sadness) trigger three comforting suggestions drawn
from a bilingual corpus, delivered as synthesized speech.
"""

__version__ = "0.1.0"

from .audio_io import AudioClip, read_wav, resample_linear, write_wav
from .features import (
    FeatureConfig,
    FeatureStats,
    MelSpectrogram,
    log_mel_spectrogram,
    normalize_features,
)
from .ser import (
    Emotion,
    EmotionDistribution,
    NEGATIVE_EMOTIONS,
    SerModel,
    TrainConfig,
    build_ser_model,
    evaluate_ser,
    filter_negative,
    ser_forward,
    train_ser,
)

__all__ = [
    "AudioClip",
    "Emotion",
    "EmotionDistribution",
    "FeatureConfig",
    "FeatureStats",
    "MelSpectrogram",
    "NEGATIVE_EMOTIONS",
    "SerModel",
    "TrainConfig",
    "build_ser_model",
    "evaluate_ser",
    "filter_negative",
    "log_mel_spectrogram",
    "normalize_features",
    "read_wav",
    "resample_linear",
    "ser_forward",
    "train_ser",
    "write_wav",
]
