"""WAV codec and resampler contracts."""

import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from empath.audio_io import AudioClip, read_wav, resample_linear, write_wav
from empath.errors import EmptyClip, MalformedContainer, UnsupportedEncoding


def make_wav(frames: bytes, channels=1, sample_rate=16000, bits=16, audio_format=1,
             extra_chunk=None) -> bytes:
    fmt = struct.pack(
        "<HHIIHH", audio_format, channels, sample_rate,
        sample_rate * channels * bits // 8, channels * bits // 8, bits,
    )
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
    if extra_chunk:
        body += extra_chunk
    body += b"data" + struct.pack("<I", len(frames)) + frames
    if len(frames) & 1:
        body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body


class TestReadWav:
    def test_linear_scaling(self):
        frames = struct.pack("<3h", 0, 16384, -32768)
        clip = read_wav(make_wav(frames))
        assert clip.sample_rate == 16000
        np.testing.assert_array_equal(clip.samples, [0.0, 0.5, -1.0])

    def test_stereo_downmix_mean(self):
        frames = struct.pack("<2h", 1000, 3000)
        clip = read_wav(make_wav(frames, channels=2))
        assert clip.samples[0] == 0.06103515625

    def test_downmix_order_independent(self):
        a = read_wav(make_wav(struct.pack("<4h", 100, -700, 250, 321), channels=2))
        b = read_wav(make_wav(struct.pack("<4h", -700, 100, 321, 250), channels=2))
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_unknown_chunks_skipped(self):
        junk = b"LIST" + struct.pack("<I", 5) + b"junk!" + b"\x00"
        clip = read_wav(make_wav(struct.pack("<h", 1234), extra_chunk=junk))
        assert len(clip.samples) == 1

    def test_bad_magic(self):
        with pytest.raises(MalformedContainer):
            read_wav(b"RIFX" + b"\x00" * 40)

    def test_truncated(self):
        with pytest.raises(MalformedContainer):
            read_wav(b"RI")

    def test_overrunning_riff_size(self):
        data = make_wav(struct.pack("<h", 0))
        with pytest.raises(MalformedContainer):
            read_wav(data[:-4])

    def test_missing_data_chunk(self):
        fmt = struct.pack("<HHIIHH", 1, 1, 16000, 32000, 2, 16)
        body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
        blob = b"RIFF" + struct.pack("<I", len(body)) + body
        with pytest.raises(MalformedContainer):
            read_wav(blob)

    def test_non_pcm_rejected(self):
        with pytest.raises(UnsupportedEncoding):
            read_wav(make_wav(struct.pack("<h", 0), audio_format=3))

    def test_wrong_bit_depth_rejected(self):
        with pytest.raises(UnsupportedEncoding):
            read_wav(make_wav(b"\x00" * 3, bits=8))

    def test_too_many_channels_rejected(self):
        with pytest.raises(UnsupportedEncoding):
            read_wav(make_wav(b"\x00" * 6, channels=3))

    def test_ragged_data_chunk(self):
        with pytest.raises(MalformedContainer):
            read_wav(make_wav(b"\x00\x01\x02"))


class TestWriteWav:
    def test_zero_sample(self):
        clip = read_wav(write_wav(AudioClip(samples=np.array([0.0]), sample_rate=16000)))
        assert clip.samples[0] == 0.0

    def test_clamp_above_one(self):
        data = write_wav(AudioClip(samples=np.array([2.0]), sample_rate=16000))
        (value,) = struct.unpack("<h", data[-2:])
        assert value == 32767

    def test_clamp_below_minus_one(self):
        data = write_wav(AudioClip(samples=np.array([-2.0]), sample_rate=16000))
        (value,) = struct.unpack("<h", data[-2:])
        assert value == -32768

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1, max_size=400),
           st.sampled_from([8000, 16000, 44100]))
    def test_round_trip_within_quantum(self, samples, rate):
        clip = AudioClip(samples=np.array(samples), sample_rate=rate)
        decoded = read_wav(write_wav(clip))
        assert decoded.sample_rate == rate
        assert np.max(np.abs(decoded.samples - clip.samples)) <= 1.0 / 32768.0


class TestResample:
    def test_identity_at_same_rate(self):
        clip = AudioClip(samples=np.array([0.1, -0.2, 0.3]), sample_rate=16000)
        out = resample_linear(clip, 16000)
        np.testing.assert_array_equal(out.samples, clip.samples)

    def test_hand_evaluated_upsample(self):
        clip = AudioClip(samples=np.array([0.0, 1.0]), sample_rate=2)
        out = resample_linear(clip, 4)
        np.testing.assert_allclose(out.samples, [0.0, 0.5, 1.0, 1.0])

    def test_output_length_formula(self):
        clip = AudioClip(samples=np.zeros(44100), sample_rate=44100)
        assert len(resample_linear(clip, 16000).samples) == 16000

    def test_empty_clip_rejected(self):
        with pytest.raises(EmptyClip):
            resample_linear(AudioClip(samples=np.array([]), sample_rate=16000), 8000)

    def test_spectral_peak_preserved(self):
        # 440 Hz sine resampled 44100 -> 16000 keeps its FFT peak within a bin
        t = np.arange(44100) / 44100.0
        clip = AudioClip(samples=0.8 * np.sin(2 * np.pi * 440.0 * t), sample_rate=44100)
        out = resample_linear(clip, 16000)
        spectrum = np.abs(np.fft.rfft(out.samples, n=16384))
        peak = int(np.argmax(spectrum))
        expected = round(440.0 * 16384 / 16000)
        assert abs(peak - expected) <= 1
