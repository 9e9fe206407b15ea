#!/usr/bin/env python3
# The whole flow in one process: train both models briefly, then run an
# analyze turn on a synthetic angry clip, exactly as the HTTP service would.

import json
import tempfile
from pathlib import Path

from empath.audio_io import write_wav
from empath.features import FeatureConfig
from empath.recommend import (
    build_rec_model,
    default_corpus_path,
    default_embeddings_path,
    load_embeddings,
    load_suggestions,
    train_rec,
)
from empath.rng import Rng
from empath.ser import (
    Emotion,
    TrainConfig,
    build_ser_model,
    make_synthetic_clips,
    prepare_ser_dataset,
    synth_emotion_clip,
    train_ser,
)
from empath.service import Pipeline, SessionLog
from empath.tts import TtsBackendConfig, load_templates

config = FeatureConfig()

print("training the emotion classifier (30 epochs on 60 synthetic clips)...")
clips = make_synthetic_clips(10, seed=42, config=config)
dataset, stats = prepare_ser_dataset(clips, config)
ser_model = build_ser_model(seed=42, feature_config=config)
ser_model.stats = stats
train_ser(ser_model, dataset, TrainConfig(epochs=30, batch_size=16, learning_rate=5e-3, seed=42))

print("training the recommender (60 epochs on the seed corpus)...")
corpus = load_suggestions(str(default_corpus_path()))
rec_model = build_rec_model(seed=7, embeddings=load_embeddings(str(default_embeddings_path())))
train_rec(rec_model, corpus, TrainConfig(epochs=60, batch_size=16, learning_rate=1e-2, seed=7))

log_path = Path(tempfile.mkdtemp()) / "sessions.jsonl"
pipeline = Pipeline(
    ser_model=ser_model,
    rec_model=rec_model,
    corpus=corpus,
    templates=load_templates(),
    tts=TtsBackendConfig(kind="stub"),
    session_log=SessionLog(str(log_path)),
)

angry = synth_emotion_clip(Emotion.ANGER, Rng(777).split("demo"), config)
response = pipeline.analyze(write_wav(angry), language="en")
print("\nanalyze response:")
print(json.dumps(response.as_dict(), indent=2, ensure_ascii=False))

wav = pipeline.clips.get(response.audio_ref)
print(f"\nsynthesized answer: {len(wav)} WAV bytes under ref {response.audio_ref}")
print(f"session log: {log_path.read_text().strip()}")
