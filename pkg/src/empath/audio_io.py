"""PCM 16-bit WAV decoding/encoding and linear resampling.

Only RIFF/WAVE containers holding 16-bit PCM (mono or stereo) are accepted;
everything else is rejected outright so behavior stays bit-exact testable.
All samples live in [-1.0, 1.0] as float64.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import EmptyClip, MalformedContainer, UnsupportedEncoding


@dataclass(frozen=True)
class AudioClip:
    """Mono audio: samples in [-1, 1] plus their sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


def read_wav(data: bytes) -> AudioClip:
    """Decode PCM 16-bit WAV bytes into a mono AudioClip.

    Stereo input is downmixed by per-frame arithmetic mean. Integer samples
    map to floats by division by 32768. Chunks other than `fmt ` and `data`
    are skipped.
    """
    if len(data) < 12:
        raise MalformedContainer("file too short for a RIFF header")
    if data[0:4] != b"RIFF":
        raise MalformedContainer("missing RIFF magic")
    (riff_size,) = struct.unpack_from("<I", data, 4)
    if riff_size + 8 > len(data):
        raise MalformedContainer("declared RIFF size overruns the file")
    if data[8:12] != b"WAVE":
        raise MalformedContainer("missing WAVE form type")

    fmt_chunk = None
    data_chunk = None
    offset = 12
    end = riff_size + 8
    while offset + 8 <= end:
        chunk_id = data[offset : offset + 4]
        (chunk_size,) = struct.unpack_from("<I", data, offset + 4)
        body_start = offset + 8
        if body_start + chunk_size > end:
            raise MalformedContainer(f"chunk {chunk_id!r} overruns the container")
        body = data[body_start : body_start + chunk_size]
        if chunk_id == b"fmt " and fmt_chunk is None:
            fmt_chunk = body
        elif chunk_id == b"data" and data_chunk is None:
            data_chunk = body
        # chunks are word-aligned; odd sizes carry one pad byte
        offset = body_start + chunk_size + (chunk_size & 1)

    if fmt_chunk is None:
        raise MalformedContainer("missing fmt chunk")
    if data_chunk is None:
        raise MalformedContainer("missing data chunk")
    if len(fmt_chunk) < 16:
        raise MalformedContainer("fmt chunk too short")

    audio_format, channels, sample_rate, _, _, bits = struct.unpack_from("<HHIIHH", fmt_chunk, 0)
    if audio_format != 1:
        raise UnsupportedEncoding(f"audio format {audio_format} is not PCM")
    if bits != 16:
        raise UnsupportedEncoding(f"{bits}-bit samples unsupported; only 16-bit PCM")
    if channels not in (1, 2):
        raise UnsupportedEncoding(f"{channels} channels unsupported; only mono or stereo")
    if sample_rate == 0:
        raise MalformedContainer("zero sample rate")

    frame_size = 2 * channels
    if len(data_chunk) % frame_size != 0:
        raise MalformedContainer("data chunk is not a whole number of frames")

    ints = np.frombuffer(data_chunk, dtype="<i2").astype(np.float64)
    if channels == 2:
        ints = ints.reshape(-1, 2).mean(axis=1)
    return AudioClip(samples=ints / 32768.0, sample_rate=sample_rate)


def write_wav(clip: AudioClip) -> bytes:
    """Encode a clip as mono PCM 16-bit WAV bytes.

    Samples are clamped to [-1, 1] and quantized so that the read_wav round
    trip stays within 1/32768 per sample.
    """
    clamped = np.clip(clip.samples, -1.0, 1.0)
    ints = np.clip(np.rint(clamped * 32768.0), -32768, 32767).astype("<i2")
    payload = ints.tobytes()

    header = b"WAVE"
    fmt = struct.pack("<HHIIHH", 1, 1, clip.sample_rate, clip.sample_rate * 2, 2, 16)
    chunks = header
    chunks += b"fmt " + struct.pack("<I", len(fmt)) + fmt
    chunks += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) & 1:
        chunks += b"\x00"
    return b"RIFF" + struct.pack("<I", len(chunks)) + chunks


def resample_linear(clip: AudioClip, target_rate: int) -> AudioClip:
    """Resample by linear interpolation between neighboring samples.

    Output length is floor(len * target_rate / source_rate); positions past
    the final source sample hold its value.
    """
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    if len(clip.samples) == 0:
        raise EmptyClip("cannot resample an empty clip")
    if target_rate == clip.sample_rate:
        return AudioClip(samples=clip.samples.copy(), sample_rate=target_rate)

    out_len = (len(clip.samples) * target_rate) // clip.sample_rate
    positions = np.arange(out_len) * (clip.sample_rate / target_rate)
    resampled = np.interp(positions, np.arange(len(clip.samples)), clip.samples)
    return AudioClip(samples=resampled, sample_rate=target_rate)
