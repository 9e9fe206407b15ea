#!/usr/bin/env python3
# Train the suggestion recommender on the shipped bilingual corpus and ask it
# for help with each negative emotion, in both languages.

from empath.recommend import (
    build_rec_model,
    default_corpus_path,
    default_embeddings_path,
    load_embeddings,
    load_suggestions,
    recommend,
)
from empath.ser import Emotion, TrainConfig
from empath.recommend import train_rec

corpus = load_suggestions(str(default_corpus_path()))
table = load_embeddings(str(default_embeddings_path()))
print(f"corpus: {len(corpus)} suggestions; vocabulary: {len(table.vocab)} tokens (d={table.dimension})")

model = build_rec_model(seed=7, embeddings=table)
train_rec(model, corpus, TrainConfig(epochs=60, batch_size=16, learning_rate=1e-2, seed=7))

for emotion in (Emotion.ANGER, Emotion.SADNESS, Emotion.FEAR):
    for lang in ("en", "fa"):
        result = recommend(corpus, model, emotion, lang)
        print(f"\n{emotion.label} / {lang}:")
        for r in result.recommendations:
            print(f"  [{r.score:.3f}] {r.suggestion.text}")
