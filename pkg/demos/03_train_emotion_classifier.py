#!/usr/bin/env python3
# Train the six-way emotion classifier on the synthetic band-profile dataset.
# Takes a couple of minutes on a laptop; everything is seeded.

import numpy as np

from empath.features import FeatureConfig
from empath.ser import (
    EMOTION_NAMES,
    TrainConfig,
    build_ser_model,
    evaluate_ser,
    make_synthetic_clips,
    prepare_ser_dataset,
    train_ser,
)

config = FeatureConfig()
clips = make_synthetic_clips(n_per_class=10, seed=42, config=config)
dataset, stats = prepare_ser_dataset(clips, config)
print(f"dataset: {len(dataset)} clips, features {dataset[0][0].values.shape}")

model = build_ser_model(seed=42, feature_config=config)
model.stats = stats
print(f"model parameters: {model.parameter_count()}")

report = train_ser(
    model, dataset, TrainConfig(epochs=30, batch_size=16, learning_rate=5e-3, seed=42)
)
for i in (0, 9, 19, 29):
    print(f"epoch {i + 1:>2}: loss {report.epoch_losses[i]:.3f} "
          f"accuracy {report.epoch_accuracies[i]:.2f}")

metrics = evaluate_ser(model, dataset)
print(f"\nfinal training accuracy: {metrics['accuracy']:.2f}")
print("confusion (rows = truth):")
print(f"{'':>12}" + "".join(f"{name[:4]:>6}" for name in EMOTION_NAMES))
for name, row in zip(EMOTION_NAMES, metrics["confusion"]):
    print(f"{name:>12}" + "".join(f"{n:>6}" for n in row))
