"""Text-to-speech delivery through a pluggable backend.

The stub backend maps each UTF-8 byte of the text to 50 ms of a sine tone at
200 + 4*byte Hz (16 kHz, amplitude 0.5), which makes the whole pipeline
testable with no external services. The http backend POSTs JSON to a real
synthesis engine and decodes the WAV it returns, never altering the audio.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests

from .audio_io import AudioClip, read_wav
from .errors import (
    BackendError,
    BackendUnreachable,
    EmpathError,
    MalformedResponse,
    TemplateError,
    Timeout,
)
from .ser import Emotion, NEGATIVE_EMOTIONS

STUB_SAMPLE_RATE = 16000
STUB_SAMPLES_PER_BYTE = 800  # 50 ms at 16 kHz


@dataclass(frozen=True)
class TtsRequest:
    text: str
    language: str = "en"
    voice: str | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("TTS request text must be nonempty")


@dataclass(frozen=True)
class TtsBackendConfig:
    kind: str = "stub"  # stub | http
    endpoint: str | None = None
    timeout: float = 10.0

    def __post_init__(self):
        if self.kind not in ("stub", "http"):
            raise ValueError(f"unknown TTS backend kind {self.kind!r}")
        if self.kind == "http" and not (self.endpoint or "").startswith(("http://", "https://")):
            raise ValueError("http backend requires an http(s) endpoint URL")


def synthesize(request: TtsRequest, config: TtsBackendConfig) -> AudioClip:
    """Turn text into audio via the configured backend."""
    if config.kind == "stub":
        return _synthesize_stub(request.text)
    return _synthesize_http(request, config)


def _synthesize_stub(text: str) -> AudioClip:
    data = text.encode("utf-8")
    t = np.arange(STUB_SAMPLES_PER_BYTE) / STUB_SAMPLE_RATE
    segments = [
        0.5 * np.sin(2.0 * np.pi * (200.0 + 4.0 * byte) * t) for byte in data
    ]
    return AudioClip(samples=np.concatenate(segments), sample_rate=STUB_SAMPLE_RATE)


def _synthesize_http(request: TtsRequest, config: TtsBackendConfig) -> AudioClip:
    payload = {"text": request.text, "language": request.language, "voice": request.voice}
    try:
        response = requests.post(config.endpoint, json=payload, timeout=config.timeout)
    except requests.Timeout:
        raise Timeout(f"no answer from {config.endpoint} within {config.timeout}s") from None
    except requests.ConnectionError as exc:
        raise BackendUnreachable(f"cannot reach {config.endpoint}: {exc}") from None
    if not 200 <= response.status_code < 300:
        raise BackendError(
            f"backend answered {response.status_code}: {response.text[:200]}"
        )
    try:
        return read_wav(response.content)
    except EmpathError as exc:
        raise MalformedResponse(f"backend response is not decodable WAV: {exc}") from None


@dataclass(frozen=True)
class NotificationTemplates:
    """Per-language notification template plus emotion-name translations."""

    by_language: dict[str, dict]

    def render(self, emotion: Emotion, language: str) -> str:
        entry = self.by_language[language]
        return entry["notification"].format(emotion=entry["emotions"][emotion.label])


def load_templates(path: str | None = None) -> NotificationTemplates:
    """Load and validate the template file; missing pieces fail here, at
    startup, never at request time."""
    if path is None:
        path = Path(__file__).parent / "data" / "tts_templates.json"
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    for lang in ("en", "fa"):
        if lang not in raw:
            raise TemplateError(f"template file lacks language {lang!r}")
        entry = raw[lang]
        if "notification" not in entry or "{emotion}" not in entry["notification"]:
            raise TemplateError(f"{lang}: notification template missing or lacks {{emotion}}")
        names = entry.get("emotions", {})
        for emotion in NEGATIVE_EMOTIONS:
            if emotion.label not in names:
                raise TemplateError(f"{lang}: no translation for {emotion.label}")
    return NotificationTemplates(by_language=raw)


def render_notification(
    emotion: Emotion, language: str, templates: NotificationTemplates | None = None
) -> str:
    """Fill the per-language empathy notification for a negative emotion."""
    if emotion not in NEGATIVE_EMOTIONS:
        raise ValueError(f"{emotion.label} does not trigger a notification")
    if templates is None:
        templates = load_templates()
    return templates.render(emotion, language)
