"""Orchestration: audio in, emotion out, suggestions out, spoken audio out.

A single analyze turn runs decode -> features -> classifier -> negative
filter; a negative emotion adds notification + top-3 suggestions + synthesized
speech. Every successful call appends one JSONL session record. Models and
corpora are loaded once at startup as frozen snapshots; only the clip store
and the session log mutate afterwards, each behind its own lock.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path

from .audio_io import read_wav, resample_linear, write_wav
from .errors import (
    ConfigError,
    DecodeError,
    EmpathError,
    InvalidLanguage,
    ModelNotLoaded,
    PipelineError,
    TtsError,
)
from .features import log_mel_spectrogram, normalize_features
from .recommend import (
    LANGUAGES,
    RecModel,
    SuggestionCorpus,
    load_rec_checkpoint,
    load_suggestions,
    recommend,
)
from .ser import (
    EmotionDistribution,
    SerModel,
    filter_negative,
    load_ser_checkpoint,
    ser_forward,
)
from .tts import NotificationTemplates, TtsBackendConfig, TtsRequest, load_templates, synthesize

DEFAULT_CLIP_CAPACITY = 256


@dataclass(frozen=True)
class ServiceConfig:
    ser_checkpoint: str
    rec_checkpoint: str
    corpus: str
    embeddings: str
    session_log: str
    templates: str | None = None
    host: str = "127.0.0.1"
    port: int = 8000
    threshold: float = 0.0
    tts_kind: str = "stub"
    tts_endpoint: str | None = None
    tts_timeout: float = 10.0

    def tts_config(self) -> TtsBackendConfig:
        return TtsBackendConfig(
            kind=self.tts_kind, endpoint=self.tts_endpoint, timeout=self.tts_timeout
        )


_REQUIRED_KEYS = ("ser_checkpoint", "rec_checkpoint", "corpus", "embeddings", "session_log")
_INT_KEYS = ("port",)
_FLOAT_KEYS = ("threshold", "tts_timeout")


def load_config(path: str) -> ServiceConfig:
    """Read a JSON object or flat `key = value` file, then apply EMPATH_*
    environment overrides (e.g. EMPATH_PORT)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None

    raw: dict[str, str] = {}
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise ConfigError("config JSON must be an object")
        raw = {k: v for k, v in obj.items()}
    else:
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line {lineno}: expected key = value")
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip().strip("\"'")

    for key in list(raw):
        override = os.environ.get(f"EMPATH_{key.upper()}")
        if override is not None:
            raw[key] = override
    for key, value in os.environ.items():
        if key.startswith("EMPATH_"):
            raw.setdefault(key[len("EMPATH_") :].lower(), value)

    known = set(ServiceConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = [k for k in _REQUIRED_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"missing config keys: {missing}")

    coerced: dict = {}
    for key, value in raw.items():
        try:
            if key in _INT_KEYS:
                coerced[key] = int(value)
            elif key in _FLOAT_KEYS:
                coerced[key] = float(value)
            else:
                coerced[key] = value
        except (TypeError, ValueError):
            raise ConfigError(f"config key {key}: cannot parse {value!r}") from None
    return ServiceConfig(**coerced)


class ClipStore:
    """Bounded in-memory WAV store with LRU eviction; thread-safe."""

    def __init__(self, capacity: int = DEFAULT_CLIP_CAPACITY):
        self._capacity = capacity
        self._clips: OrderedDict[str, bytes] = OrderedDict()
        self._lock = threading.Lock()

    def put(self, wav_bytes: bytes) -> str:
        ref = uuid.uuid4().hex
        with self._lock:
            self._clips[ref] = wav_bytes
            while len(self._clips) > self._capacity:
                self._clips.popitem(last=False)
        return ref

    def get(self, ref: str) -> bytes | None:
        with self._lock:
            if ref not in self._clips:
                return None
            self._clips.move_to_end(ref)
            return self._clips[ref]

    def __len__(self) -> int:
        with self._lock:
            return len(self._clips)


class SessionLog:
    """Append-only JSONL log; one whole line per record, flushed before ack."""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()

    def append(self, record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False) + "\n"
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()


@dataclass
class AnalyzeResponse:
    distribution: dict[str, float]
    top_emotion: str
    negative: bool
    notification_text: str | None = None
    recommendations: list[dict] = field(default_factory=list)
    audio_ref: str | None = None
    warning: str | None = None

    def as_dict(self) -> dict:
        return {
            "distribution": self.distribution,
            "top_emotion": self.top_emotion,
            "negative": self.negative,
            "notification_text": self.notification_text,
            "recommendations": self.recommendations,
            "audio_ref": self.audio_ref,
            "warning": self.warning,
        }


@dataclass
class Pipeline:
    """Frozen model/corpus snapshot plus the two mutable side resources."""

    ser_model: SerModel
    rec_model: RecModel
    corpus: SuggestionCorpus
    templates: NotificationTemplates
    tts: TtsBackendConfig
    threshold: float = 0.0
    session_log: SessionLog | None = None
    clips: ClipStore = field(default_factory=ClipStore)
    clock: callable = time.time

    def analyze(self, wav_bytes: bytes, language: str = "en") -> AnalyzeResponse:
        """One full perceive -> filter -> recommend -> speak turn."""
        if self.ser_model is None or self.rec_model is None:
            raise ModelNotLoaded("pipeline models are not loaded")
        if language not in LANGUAGES:
            raise InvalidLanguage(f"unknown language {language!r}")

        try:
            clip = read_wav(wav_bytes)
        except EmpathError as exc:
            raise DecodeError(str(exc)) from None

        config = self.ser_model.feature_config
        try:
            if clip.sample_rate != config.sample_rate:
                clip = resample_linear(clip, config.sample_rate)
            spec = normalize_features(log_mel_spectrogram(clip, config), self.ser_model.stats)
        except EmpathError as exc:
            raise PipelineError("feature", str(exc)) from None

        try:
            dist = ser_forward(self.ser_model, spec)
        except EmpathError as exc:
            raise PipelineError("ser", str(exc)) from None

        response = self.respond_to_distribution(dist, language)
        self._log(clip.duration, language, response)
        return response

    def respond_to_distribution(self, dist: EmotionDistribution, language: str) -> AnalyzeResponse:
        """Everything downstream of the classifier: filter, recommend, speak."""
        triggered = filter_negative(dist, self.threshold)
        response = AnalyzeResponse(
            distribution=dist.as_dict(),
            top_emotion=dist.top.label,
            negative=triggered is not None,
        )
        if triggered is None:
            return response

        try:
            response.notification_text = self.templates.render(triggered, language)
            result = recommend(self.corpus, self.rec_model, triggered, language, k=3)
            response.recommendations = [
                {"id": r.suggestion.id, "text": r.suggestion.text}
                for r in result.recommendations
            ]
        except EmpathError as exc:
            raise PipelineError("recommend", str(exc)) from None

        spoken = "; ".join(
            [response.notification_text] + [r["text"] for r in response.recommendations]
        )
        try:
            spoken_clip = synthesize(TtsRequest(text=spoken, language=language), self.tts)
            response.audio_ref = self.clips.put(write_wav(spoken_clip))
        except TtsError as exc:
            # the text recommendations are the primary payload; audio is
            # best-effort
            response.warning = f"tts: {exc}"
        return response

    def _log(self, duration: float, language: str, response: AnalyzeResponse) -> None:
        if self.session_log is None:
            return
        record = {
            "session_id": uuid.uuid4().hex,
            "timestamp_ms": int(self.clock() * 1000),
            "language": language,
            "input_duration_s": round(duration, 6),
            "top_emotion": response.top_emotion,
            "probabilities": response.distribution,
            "recommendation_ids": [r["id"] for r in response.recommendations],
        }
        try:
            self.session_log.append(record)
        except OSError:
            # logging is best-effort by contract; the analyze result stands
            pass


def load_pipeline(config: ServiceConfig) -> Pipeline:
    """Load every referenced file, failing fast with stage attribution."""
    try:
        ser_model = load_ser_checkpoint(config.ser_checkpoint)
    except (EmpathError, OSError) as exc:
        raise ConfigError(f"ser checkpoint: {exc}") from None
    try:
        rec_model = load_rec_checkpoint(config.rec_checkpoint)
    except (EmpathError, OSError) as exc:
        raise ConfigError(f"rec checkpoint: {exc}") from None
    try:
        corpus = load_suggestions(config.corpus)
    except (EmpathError, OSError) as exc:
        raise ConfigError(f"corpus: {exc}") from None
    from .recommend import load_embeddings

    try:
        table = load_embeddings(config.embeddings)
    except (EmpathError, OSError) as exc:
        raise ConfigError(f"embeddings: {exc}") from None
    if table.dimension != rec_model.embeddings.dimension:
        raise ConfigError(
            f"embeddings dimension {table.dimension} disagrees with the rec "
            f"checkpoint ({rec_model.embeddings.dimension})"
        )
    try:
        templates = load_templates(config.templates)
    except (EmpathError, OSError) as exc:
        raise ConfigError(f"templates: {exc}") from None

    return Pipeline(
        ser_model=ser_model,
        rec_model=rec_model,
        corpus=corpus,
        templates=templates,
        tts=config.tts_config(),
        threshold=config.threshold,
        session_log=SessionLog(config.session_log),
    )
