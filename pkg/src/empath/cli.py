"""Command-line interface.

Subcommands: train-ser, eval-ser, analyze-file, train-rec, recommend, serve.
Every command prints a single JSON object on success (serve excepted).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import EmpathError
from .features import FeatureConfig, load_feature_cache, save_feature_cache
from .recommend import (
    build_rec_model,
    load_embeddings,
    load_rec_checkpoint,
    load_suggestions,
    recommend as rec_recommend,
    save_rec_checkpoint,
    train_rec,
)
from .ser import (
    Emotion,
    TrainConfig,
    build_ser_model,
    evaluate_ser,
    extract_features,
    filter_negative,
    load_ser_checkpoint,
    load_wav_dataset,
    prepare_ser_dataset,
    save_ser_checkpoint,
    ser_forward,
    train_ser,
)


def _emit(obj: dict) -> None:
    print(json.dumps(obj, ensure_ascii=False))


def _cmd_train_ser(args) -> None:
    from .features import compute_feature_stats, normalize_features

    config = FeatureConfig()
    clips = load_wav_dataset(args.data)
    labels = [label for _, label in clips]
    if args.cache:
        # features round-trip through the float32 cache either way so cached
        # and fresh runs train on identical values
        try:
            specs = load_feature_cache(args.cache, config)
            if len(specs) != len(clips):
                raise EmpathError("cache count mismatch")
        except (OSError, EmpathError):
            raw = [spec for spec, _ in extract_features(clips, config)]
            save_feature_cache(args.cache, raw, config)
            specs = load_feature_cache(args.cache, config)
        stats = compute_feature_stats(specs)
        dataset = [
            (normalize_features(spec, stats), label) for spec, label in zip(specs, labels)
        ]
    else:
        dataset, stats = prepare_ser_dataset(clips, config)

    model = build_ser_model(seed=args.seed, feature_config=config)
    model.stats = stats
    train_cfg = TrainConfig(
        epochs=args.epochs, batch_size=args.batch_size, learning_rate=args.lr, seed=args.seed
    )
    report = train_ser(model, dataset, train_cfg)
    save_ser_checkpoint(args.out, model)
    _emit({"checkpoint": args.out, "examples": len(dataset), **report.as_dict()})


def _cmd_eval_ser(args) -> None:
    model = load_ser_checkpoint(args.ckpt)
    clips = load_wav_dataset(args.data)
    dataset, _ = prepare_ser_dataset(clips, model.feature_config, stats=model.stats)
    _emit(evaluate_ser(model, dataset))


def _cmd_analyze_file(args) -> None:
    from .audio_io import read_wav, resample_linear
    from .features import log_mel_spectrogram, normalize_features

    model = load_ser_checkpoint(args.ckpt)
    with open(args.wav, "rb") as fh:
        clip = read_wav(fh.read())
    config = model.feature_config
    if clip.sample_rate != config.sample_rate:
        clip = resample_linear(clip, config.sample_rate)
    spec = normalize_features(log_mel_spectrogram(clip, config), model.stats)
    dist = ser_forward(model, spec)
    triggered = filter_negative(dist, args.threshold)
    _emit(
        {
            "probabilities": dist.as_dict(),
            "top_emotion": dist.top.label,
            "negative": triggered is not None,
            "emotion": triggered.label if triggered else None,
        }
    )


def _cmd_train_rec(args) -> None:
    corpus = load_suggestions(args.corpus)
    table = load_embeddings(args.embeddings)
    model = build_rec_model(seed=args.seed, embeddings=table)
    train_cfg = TrainConfig(
        epochs=args.epochs, batch_size=args.batch_size, learning_rate=args.lr, seed=args.seed
    )
    report = train_rec(model, corpus, train_cfg)
    save_rec_checkpoint(args.out, model)
    _emit({"checkpoint": args.out, "examples": len(corpus), **report.as_dict()})


def _cmd_recommend(args) -> None:
    model = load_rec_checkpoint(args.ckpt)
    corpus = load_suggestions(args.corpus)
    emotion = Emotion[args.emotion.upper()]
    result = rec_recommend(corpus, model, emotion, args.lang, k=args.k)
    _emit(
        {
            "emotion": emotion.label,
            "language": args.lang,
            "truncated": result.truncated,
            "suggestions": [
                {"id": r.suggestion.id, "text": r.suggestion.text, "score": r.score}
                for r in result.recommendations
            ],
        }
    )


def _cmd_serve(args) -> None:
    from .app import serve
    from .service import load_config

    serve(load_config(args.config))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="empath", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-ser", help="train the emotion classifier on a WAV directory")
    p.add_argument("--data", required=True, help="directory of ShEMO-style named WAV files")
    p.add_argument("--out", required=True, help="checkpoint path to write")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--lr", type=float, default=5e-3)
    p.add_argument("--cache", help="optional feature cache file (EMPF)")
    p.set_defaults(func=_cmd_train_ser)

    p = sub.add_parser("eval-ser", help="evaluate a checkpoint on a WAV directory")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--data", required=True)
    p.set_defaults(func=_cmd_eval_ser)

    p = sub.add_parser("analyze-file", help="classify one WAV file")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--wav", required=True)
    p.add_argument("--threshold", type=float, default=0.0)
    p.set_defaults(func=_cmd_analyze_file)

    p = sub.add_parser("train-rec", help="train the suggestion recommender")
    p.add_argument("--corpus", required=True, help="JSONL suggestion corpus")
    p.add_argument("--embeddings", required=True, help="word-vector text file")
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--lr", type=float, default=1e-2)
    p.set_defaults(func=_cmd_train_rec)

    p = sub.add_parser("recommend", help="top suggestions for an emotion")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--emotion", required=True, choices=["anger", "fear", "sadness"])
    p.add_argument("--lang", required=True, choices=["en", "fa"])
    p.add_argument("--k", type=int, default=3)
    p.set_defaults(func=_cmd_recommend)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except EmpathError as exc:
        print(json.dumps({"error": str(exc), "type": type(exc).__name__}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
