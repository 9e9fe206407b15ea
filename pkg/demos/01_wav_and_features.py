#!/usr/bin/env python3
# WAV round trips, resampling, and the log-mel front end.

import numpy as np

from empath.audio_io import AudioClip, read_wav, resample_linear, write_wav
from empath.features import FeatureConfig, filter_center_frequencies, log_mel_spectrogram

# a 440 Hz tone at CD-ish rate
t = np.arange(44100) / 44100.0
clip = AudioClip(samples=0.6 * np.sin(2 * np.pi * 440.0 * t), sample_rate=44100)
print(f"original: {len(clip.samples)} samples at {clip.sample_rate} Hz")

# encode -> decode round trip loses at most one 16-bit quantum per sample
decoded = read_wav(write_wav(clip))
print(f"round-trip max error: {np.max(np.abs(decoded.samples - clip.samples)):.2e} "
      f"(quantum = {1/32768:.2e})")

# bring it to the pipeline's 16 kHz and extract features
config = FeatureConfig()
narrow = resample_linear(clip, config.sample_rate)
spec = log_mel_spectrogram(narrow, config)
print(f"features: {spec.values.shape} (frames x mel bands)")

# the hottest band should be the one whose center is nearest 440 Hz
centers = filter_center_frequencies(config)
hot = int(np.argmax(spec.values[:50].mean(axis=0)))
print(f"hottest band {hot} at {centers[hot]:.0f} Hz; nearest-center band is "
      f"{int(np.argmin(np.abs(centers - 440.0)))}")
