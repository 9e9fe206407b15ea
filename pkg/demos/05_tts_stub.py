#!/usr/bin/env python3
# The deterministic stub synthesizer: one 50 ms tone per UTF-8 byte.

import numpy as np

from empath.audio_io import write_wav
from empath.tts import TtsBackendConfig, TtsRequest, synthesize

text = "help"
clip = synthesize(TtsRequest(text=text), TtsBackendConfig(kind="stub"))
print(f"'{text}' -> {len(clip.samples)} samples "
      f"({len(clip.samples) / clip.sample_rate:.2f} s at {clip.sample_rate} Hz)")

for i, byte in enumerate(text.encode("utf-8")):
    segment = clip.samples[i * 800 : (i + 1) * 800]
    spectrum = np.abs(np.fft.rfft(segment, n=1024))
    peak = np.argmax(spectrum) * 16000.0 / 1024.0
    print(f"  byte {chr(byte)!r} ({byte}): expected {200 + 4 * byte} Hz, measured {peak:.0f} Hz")

with open("/tmp/empath-stub.wav", "wb") as fh:
    fh.write(write_wav(clip))
print("wrote /tmp/empath-stub.wav")
