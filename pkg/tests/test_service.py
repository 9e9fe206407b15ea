"""Config, clip store, session log, the analyze flow, and HTTP endpoints."""

import json
import threading

import numpy as np
import pytest
from fastapi.testclient import TestClient

from empath.app import create_app
from empath.audio_io import write_wav
from empath.errors import ConfigError, DecodeError, InvalidLanguage
from empath.rng import Rng
from empath.ser import Emotion, EmotionDistribution, synth_emotion_clip
from empath.service import ClipStore, ServiceConfig, SessionLog, load_config, load_pipeline
from empath.tts import TtsBackendConfig


class TestConfig:
    def test_json_form(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({
            "ser_checkpoint": "ser.ckpt", "rec_checkpoint": "rec.ckpt",
            "corpus": "c.jsonl", "embeddings": "e.txt", "session_log": "s.jsonl",
            "port": 9000, "threshold": 0.25,
        }))
        config = load_config(str(path))
        assert config.port == 9000 and config.threshold == 0.25
        assert config.tts_kind == "stub"

    def test_flat_key_value_form(self, tmp_path):
        path = tmp_path / "config.conf"
        path.write_text(
            "# empath service\n"
            "ser_checkpoint = ser.ckpt\n"
            "rec_checkpoint = rec.ckpt\n"
            "corpus = c.jsonl\n"
            "embeddings = e.txt\n"
            "session_log = s.jsonl\n"
            "port = 8123\n"
        )
        assert load_config(str(path)).port == 8123

    def test_env_override(self, tmp_path, monkeypatch):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({
            "ser_checkpoint": "a", "rec_checkpoint": "b", "corpus": "c",
            "embeddings": "d", "session_log": "e", "port": 8000,
        }))
        monkeypatch.setenv("EMPATH_PORT", "9001")
        monkeypatch.setenv("EMPATH_THRESHOLD", "0.5")
        config = load_config(str(path))
        assert config.port == 9001 and config.threshold == 0.5

    def test_missing_keys(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"ser_checkpoint": "a"}))
        with pytest.raises(ConfigError, match="missing"):
            load_config(str(path))

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({
            "ser_checkpoint": "a", "rec_checkpoint": "b", "corpus": "c",
            "embeddings": "d", "session_log": "e", "voice_cloning": True,
        }))
        with pytest.raises(ConfigError, match="unknown"):
            load_config(str(path))

    def test_fail_fast_on_bad_checkpoint(self, tmp_path, rec_ckpt, seed_corpus):
        from empath.recommend import default_corpus_path, default_embeddings_path
        config = ServiceConfig(
            ser_checkpoint=str(tmp_path / "missing.ckpt"),
            rec_checkpoint=rec_ckpt,
            corpus=str(default_corpus_path()),
            embeddings=str(default_embeddings_path()),
            session_log=str(tmp_path / "s.jsonl"),
        )
        with pytest.raises(ConfigError, match="ser checkpoint"):
            load_pipeline(config)


class TestClipStore:
    def test_put_get(self):
        store = ClipStore()
        ref = store.put(b"wav-bytes")
        assert store.get(ref) == b"wav-bytes"

    def test_unknown_ref(self):
        assert ClipStore().get("nope") is None

    def test_lru_eviction(self):
        store = ClipStore(capacity=3)
        refs = [store.put(bytes([i])) for i in range(3)]
        store.get(refs[0])  # refresh the oldest
        store.put(b"new")
        assert store.get(refs[0]) is not None
        assert store.get(refs[1]) is None  # least recently used went first
        assert len(store) == 3


class TestSessionLog:
    def test_lines_parse_independently(self, tmp_path):
        log = SessionLog(str(tmp_path / "s.jsonl"))
        log.append({"a": 1})
        log.append({"b": "پیشنهاد"})
        lines = open(tmp_path / "s.jsonl", encoding="utf-8").read().splitlines()
        assert [json.loads(line) for line in lines] == [{"a": 1}, {"b": "پیشنهاد"}]

    def test_append_preserves_existing(self, tmp_path):
        path = tmp_path / "s.jsonl"
        SessionLog(str(path)).append({"run": 1})
        SessionLog(str(path)).append({"run": 2})  # fresh instance = restart
        assert len(path.read_text().splitlines()) == 2

    def test_concurrent_appends_stay_whole_lines(self, tmp_path):
        log = SessionLog(str(tmp_path / "s.jsonl"))
        n_threads, per_thread = 8, 50

        def worker(tid):
            for i in range(per_thread):
                log.append({"thread": tid, "i": i, "pad": "x" * 64})

        threads = [threading.Thread(target=worker, args=(t,)) for t in range(n_threads)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        lines = open(tmp_path / "s.jsonl").read().splitlines()
        assert len(lines) == n_threads * per_thread
        for line in lines:
            json.loads(line)  # every line parses -> no interleaving


class TestAnalyze:
    def test_negative_flow_end_to_end(self, pipeline, anger_wav):
        response = pipeline.analyze(anger_wav, language="en")
        assert response.negative is True
        assert response.top_emotion in ("anger", "fear", "sadness")
        assert 1 <= len(response.recommendations) <= 3
        assert response.notification_text
        assert pipeline.clips.get(response.audio_ref) is not None
        log_lines = open(pipeline.session_log.path).read().splitlines()
        assert len(log_lines) == 1
        record = json.loads(log_lines[0])
        assert record["recommendation_ids"] == [r["id"] for r in response.recommendations]

    def test_non_negative_flow(self, pipeline, feature_config):
        clip = synth_emotion_clip(Emotion.NEUTRALITY, Rng(778).split("calm"), feature_config)
        response = pipeline.analyze(write_wav(clip), language="en")
        assert response.negative is False
        assert response.recommendations == []
        assert response.audio_ref is None
        assert response.notification_text is None
        # one session line still written for the successful call
        assert len(open(pipeline.session_log.path).read().splitlines()) == 1

    def test_malformed_audio_no_session_line(self, pipeline):
        with pytest.raises(DecodeError):
            pipeline.analyze(b"definitely not wav", language="en")
        import os
        assert not os.path.exists(pipeline.session_log.path) or \
            open(pipeline.session_log.path).read() == ""

    def test_unknown_language_rejected(self, pipeline, anger_wav):
        with pytest.raises(InvalidLanguage):
            pipeline.analyze(anger_wav, language="de")

    def test_deterministic_modulo_audio_ref(self, pipeline, anger_wav):
        a = pipeline.analyze(anger_wav, language="en").as_dict()
        b = pipeline.analyze(anger_wav, language="en").as_dict()
        a.pop("audio_ref"), b.pop("audio_ref")
        assert a == b

    def test_persian_response_in_persian(self, pipeline, anger_wav):
        response = pipeline.analyze(anger_wav, language="fa")
        assert all(r["id"].startswith("fa-") for r in response.recommendations)

    def test_tts_failure_degrades_to_text(self, pipeline, anger_wav):
        pipeline.tts = TtsBackendConfig(
            kind="http", endpoint="http://127.0.0.1:9/unreachable", timeout=0.3
        )
        response = pipeline.analyze(anger_wav, language="en")
        assert response.negative is True
        assert len(response.recommendations) == 3
        assert response.audio_ref is None
        assert response.warning and "tts" in response.warning


class TestRespondToDistribution:
    def _dist(self, probs):
        return EmotionDistribution(probabilities=np.asarray(probs, dtype=float))

    def test_negative_false_invariants(self, pipeline):
        response = pipeline.respond_to_distribution(
            self._dist([0.1, 0.1, 0.1, 0.6, 0.05, 0.05]), "en"
        )
        assert response.negative is False
        assert response.recommendations == [] and response.audio_ref is None

    def test_negative_true_has_full_payload(self, pipeline):
        response = pipeline.respond_to_distribution(
            self._dist([0.8, 0.04, 0.04, 0.04, 0.04, 0.04]), "en"
        )
        assert response.negative is True
        assert len(response.recommendations) == 3
        assert response.notification_text and response.audio_ref


class TestHttpApi:
    @pytest.fixture()
    def client(self, pipeline):
        return TestClient(create_app(pipeline))

    def test_health(self, client):
        data = client.get("/api/v1/health").json()
        assert data["status"] == "ok"
        assert data["ser_parameters"] == 23686
        assert data["corpus_entries"] == 60
        assert data["languages"] == ["en", "fa"]

    def test_analyze_roundtrip(self, client, anger_wav):
        response = client.post(
            "/api/v1/analyze?lang=en",
            files={"audio": ("clip.wav", anger_wav, "audio/wav")},
        )
        assert response.status_code == 200
        payload = response.json()
        assert payload["negative"] is True
        audio = client.get(f"/api/v1/audio/{payload['audio_ref']}")
        assert audio.status_code == 200
        assert audio.headers["content-type"] == "audio/wav"
        assert audio.content[:4] == b"RIFF"

    def test_analyze_defaults_to_english(self, client, anger_wav):
        response = client.post(
            "/api/v1/analyze", files={"audio": ("clip.wav", anger_wav, "audio/wav")}
        )
        assert response.status_code == 200
        assert all(r["id"].startswith("en-") for r in response.json()["recommendations"])

    def test_bad_wav_is_400_with_stage(self, client):
        response = client.post(
            "/api/v1/analyze", files={"audio": ("x.wav", b"garbage", "audio/wav")}
        )
        assert response.status_code == 400
        assert response.json()["stage"] == "decode"

    def test_bad_language_is_400(self, client, anger_wav):
        response = client.post(
            "/api/v1/analyze?lang=xx", files={"audio": ("c.wav", anger_wav, "audio/wav")}
        )
        assert response.status_code == 400

    def test_unknown_audio_ref_404(self, client):
        assert client.get("/api/v1/audio/deadbeef").status_code == 404
