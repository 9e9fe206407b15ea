"""Session-scoped fixtures: trained models are expensive, so train once."""

from __future__ import annotations

import time

import pytest

from empath.audio_io import write_wav
from empath.features import FeatureConfig
from empath.recommend import (
    build_rec_model,
    default_corpus_path,
    default_embeddings_path,
    load_embeddings,
    load_suggestions,
    save_rec_checkpoint,
    train_rec,
)
from empath.rng import Rng
from empath.ser import (
    Emotion,
    TrainConfig,
    build_ser_model,
    make_synthetic_clips,
    prepare_ser_dataset,
    save_ser_checkpoint,
    synth_emotion_clip,
    train_ser,
)

SER_SEED = 42
REC_SEED = 7
SER_TRAIN = dict(epochs=30, batch_size=16, learning_rate=5e-3, seed=SER_SEED)
REC_TRAIN = dict(epochs=60, batch_size=16, learning_rate=1e-2, seed=REC_SEED)


@pytest.fixture(scope="session")
def feature_config():
    return FeatureConfig()


@pytest.fixture(scope="session")
def seed_corpus():
    return load_suggestions(str(default_corpus_path()))


@pytest.fixture(scope="session")
def mini_table():
    return load_embeddings(str(default_embeddings_path()))


@pytest.fixture(scope="session")
def trained_ser(feature_config):
    """SER model trained on the shipped synthetic dataset (60 clips)."""
    clips = make_synthetic_clips(10, seed=SER_SEED, config=feature_config)
    dataset, stats = prepare_ser_dataset(clips, feature_config)
    model = build_ser_model(seed=SER_SEED, feature_config=feature_config)
    model.stats = stats
    start = time.monotonic()
    report = train_ser(model, dataset, TrainConfig(**SER_TRAIN))
    seconds = time.monotonic() - start
    return {"model": model, "report": report, "seconds": seconds, "dataset": dataset}


@pytest.fixture(scope="session")
def trained_rec(seed_corpus, mini_table):
    """Recommender trained on the shipped bilingual seed corpus."""
    model = build_rec_model(seed=REC_SEED, embeddings=mini_table)
    start = time.monotonic()
    report = train_rec(model, seed_corpus, TrainConfig(**REC_TRAIN))
    seconds = time.monotonic() - start
    return {"model": model, "report": report, "seconds": seconds}


@pytest.fixture(scope="session")
def ser_ckpt(trained_ser, tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt") / "ser.ckpt"
    save_ser_checkpoint(str(path), trained_ser["model"])
    return str(path)


@pytest.fixture(scope="session")
def rec_ckpt(trained_rec, tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt") / "rec.ckpt"
    save_rec_checkpoint(str(path), trained_rec["model"])
    return str(path)


@pytest.fixture(scope="session")
def anger_wav(feature_config):
    """A fresh anger-profile clip the SER model never trained on, as WAV bytes."""
    clip = synth_emotion_clip(Emotion.ANGER, Rng(777).split("e2e"), feature_config)
    return write_wav(clip)


@pytest.fixture()
def pipeline(trained_ser, trained_rec, seed_corpus, tmp_path):
    """Fresh pipeline around the session models, with its own session log."""
    from empath.service import Pipeline, SessionLog
    from empath.tts import TtsBackendConfig, load_templates

    return Pipeline(
        ser_model=trained_ser["model"],
        rec_model=trained_rec["model"],
        corpus=seed_corpus,
        templates=load_templates(),
        tts=TtsBackendConfig(kind="stub"),
        session_log=SessionLog(str(tmp_path / "sessions.jsonl")),
    )
