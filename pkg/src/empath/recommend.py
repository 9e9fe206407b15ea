"""Suggestion recommender: frozen word vectors + LSTM sentence classifier.

Candidate suggestions are scored by the model's probability that they suit
the detected negative emotion; the top three in the user's language win.
The word-vector table is consumed frozen (rows never trained), matching how
pretrained embeddings are normally deployed.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import nn
from .errors import (
    CheckpointError,
    DuplicateId,
    DuplicateToken,
    EmptyCorpus,
    EmptyFile,
    EmptyTokenSequence,
    InconsistentDimension,
    InsufficientCandidates,
    InvalidEmotion,
    InvalidLanguage,
    ParseError,
)
from .nn.optim import AdamState, Params
from .rng import Rng
from .ser import Emotion, NEGATIVE_EMOTIONS, TrainConfig, TrainReport

LANGUAGES = ("en", "fa")
NEGATIVE_NAMES = ("anger", "fear", "sadness")  # class indices 0, 1, 2
MAX_TOKENS = 32
HIDDEN_SIZE = 64


@dataclass(frozen=True)
class Suggestion:
    id: str
    emotion: str
    language: str
    text: str


@dataclass
class SuggestionCorpus:
    suggestions: list[Suggestion]
    by_language: dict[str, list[Suggestion]] = field(init=False)

    def __post_init__(self):
        self.by_language = {lang: [] for lang in LANGUAGES}
        for s in self.suggestions:
            self.by_language[s.language].append(s)

    def __len__(self) -> int:
        return len(self.suggestions)

    def bucket(self, emotion: str, language: str) -> list[Suggestion]:
        return [s for s in self.by_language[language] if s.emotion == emotion]


def load_suggestions(path: str) -> SuggestionCorpus:
    """Read a JSONL corpus: one {id, emotion, language, text} object per line.

    Blank lines are allowed. Every malformed line reports its line number.
    """
    suggestions: list[Suggestion] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict) or set(obj) != {"id", "emotion", "language", "text"}:
                raise ParseError(
                    f"line {lineno}: expected exactly the keys id, emotion, language, text"
                )
            if not all(isinstance(v, str) for v in obj.values()) or not obj["text"]:
                raise ParseError(f"line {lineno}: all fields must be nonempty strings")
            if obj["emotion"] not in NEGATIVE_NAMES:
                raise InvalidEmotion(f"line {lineno}: emotion {obj['emotion']!r}")
            if obj["language"] not in LANGUAGES:
                raise InvalidLanguage(f"line {lineno}: language {obj['language']!r}")
            if obj["id"] in seen_ids:
                raise DuplicateId(f"line {lineno}: id {obj['id']!r} already used")
            seen_ids.add(obj["id"])
            suggestions.append(Suggestion(**obj))
    return SuggestionCorpus(suggestions=suggestions)


@dataclass
class EmbeddingTable:
    """Token -> row map over a (V, d) matrix; index V is the zero OOV row."""

    vocab: dict[str, int]
    vectors: np.ndarray

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    @property
    def oov_index(self) -> int:
        return self.vectors.shape[0]

    def indices(self, tokens: list[str]) -> list[int]:
        oov = self.oov_index
        return [self.vocab.get(t, oov) for t in tokens]


def load_embeddings(path: str) -> EmbeddingTable:
    """Read a text table: `token v1 v2 ... vd` per line, consistent d."""
    vocab: dict[str, int] = {}
    rows: list[list[float]] = []
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            token, values = parts[0], parts[1:]
            if dim is None:
                dim = len(values)
                if dim == 0:
                    raise InconsistentDimension(f"line {lineno}: no vector values")
            elif len(values) != dim:
                raise InconsistentDimension(
                    f"line {lineno}: {len(values)} values, expected {dim}"
                )
            if token in vocab:
                raise DuplicateToken(f"line {lineno}: token {token!r} already defined")
            try:
                rows.append([float(v) for v in values])
            except ValueError:
                raise ParseError(f"line {lineno}: non-numeric vector value") from None
            vocab[token] = len(vocab)
    if not rows:
        raise EmptyFile(f"no vectors in {path}")
    return EmbeddingTable(vocab=vocab, vectors=np.array(rows, dtype=np.float64))


def tokenize(text: str, language: str = "en") -> list[str]:
    """Lowercase, strip punctuation (Unicode P*), split on whitespace.

    ZWNJ (U+200C) is a format character, not punctuation, so it survives
    inside Persian compound words.
    """
    kept = [
        ch for ch in text.lower() if not unicodedata.category(ch).startswith("P")
    ]
    return "".join(kept).split()


@dataclass
class RecModel:
    params: Params
    embeddings: EmbeddingTable

    @property
    def hidden_size(self) -> int:
        return self.params["lstm.w_h"].shape[1]

    def parameter_count(self) -> int:
        return sum(p.size for p in self.params.values())


def build_rec_model(seed: int, embeddings: EmbeddingTable, hidden_size: int = HIDDEN_SIZE) -> RecModel:
    """Initialize the LSTM + 3-way output head over a frozen embedding table."""
    rng = Rng(seed).split("rec")
    lstm = nn.init_lstm(rng, embeddings.dimension, hidden_size)
    params: Params = {
        "lstm.w_x": lstm.w_x,
        "lstm.w_h": lstm.w_h,
        "lstm.b": lstm.b,
        "out.w": nn.glorot_uniform(rng.split("out"), (3, hidden_size), hidden_size, 3),
        "out.b": np.zeros(3),
    }
    return RecModel(params=params, embeddings=embeddings)


def _forward_logits(model: RecModel, tokens: list[str], cache: dict | None = None) -> np.ndarray:
    tokens = tokens[:MAX_TOKENS]
    if not tokens:
        raise EmptyTokenSequence("no tokens to embed")
    indices = model.embeddings.indices(tokens)
    inputs = nn.embedding_lookup(model.embeddings.vectors, indices)
    lstm = nn.LstmParams(
        w_x=model.params["lstm.w_x"], w_h=model.params["lstm.w_h"], b=model.params["lstm.b"]
    )
    hiddens, lstm_cache = nn.lstm_forward(inputs, lstm)
    logits = nn.dense_forward(hiddens[-1], model.params["out.w"], model.params["out.b"])
    if cache is not None:
        cache.update(lstm_cache=lstm_cache, hiddens=hiddens, final=hiddens[-1])
    return logits


def _backward(model: RecModel, grad_logits: np.ndarray, cache: dict) -> Params:
    grads: Params = {}
    grad_final, grads["out.w"], grads["out.b"] = nn.dense_backward(
        grad_logits, cache["final"], model.params["out.w"]
    )
    grad_hiddens = np.zeros_like(cache["hiddens"])
    grad_hiddens[-1] = grad_final
    _, grads["lstm.w_x"], grads["lstm.w_h"], grads["lstm.b"] = nn.lstm_backward(
        grad_hiddens, cache["lstm_cache"]
    )
    return grads


def rec_forward(model: RecModel, tokens: list[str]) -> np.ndarray:
    """Probability distribution over (anger, fear, sadness) for a token sequence."""
    return nn.softmax(_forward_logits(model, tokens))


def train_rec(model: RecModel, corpus: SuggestionCorpus, config: TrainConfig) -> TrainReport:
    """Adam on softmax cross-entropy; the embedding table stays frozen."""
    if len(corpus) == 0:
        raise EmptyCorpus("cannot train on an empty corpus")
    examples = [
        (tokenize(s.text, s.language), NEGATIVE_NAMES.index(s.emotion))
        for s in corpus.suggestions
    ]
    for (tokens, _), s in zip(examples, corpus.suggestions):
        if not tokens:
            raise EmptyTokenSequence(f"suggestion {s.id!r} tokenized to nothing")

    state = AdamState(lr=config.learning_rate)
    rng = Rng(config.seed).split("rec-shuffle")
    report = TrainReport()
    order = list(range(len(examples)))
    for _ in range(config.epochs):
        if config.shuffle:
            rng.shuffle(order)
        losses = []
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            grads_sum: Params = {k: np.zeros_like(v) for k, v in model.params.items()}
            batch_loss = 0.0
            for i in batch:
                tokens, label = examples[i]
                cache: dict = {}
                logits = _forward_logits(model, tokens, cache)
                loss, grad_logits = nn.softmax_cross_entropy(logits, label)
                batch_loss += loss
                for name, g in _backward(model, grad_logits, cache).items():
                    grads_sum[name] += g
            scale = 1.0 / len(batch)
            nn.adam_update(model.params, {k: v * scale for k, v in grads_sum.items()}, state)
            losses.append(batch_loss * scale)
        correct = sum(
            1 for tokens, label in examples if int(np.argmax(rec_forward(model, tokens))) == label
        )
        report.epoch_losses.append(float(np.mean(losses)))
        report.epoch_accuracies.append(correct / len(examples))
    return report


@dataclass(frozen=True)
class Recommendation:
    suggestion: Suggestion
    score: float


@dataclass(frozen=True)
class RecommendationResult:
    recommendations: list[Recommendation]
    truncated: bool


def recommend(
    corpus: SuggestionCorpus,
    model: RecModel,
    emotion: Emotion,
    language: str,
    k: int = 3,
) -> RecommendationResult:
    """Top-k same-language suggestions by model score for the given emotion.

    Ties break by ascending id. Fewer than k candidates returns them all with
    the truncated flag set; zero candidates is an error.
    """
    if emotion not in NEGATIVE_EMOTIONS:
        raise InvalidEmotion(f"{emotion.label} is not a negative emotion")
    if language not in LANGUAGES:
        raise InvalidLanguage(f"unknown language {language!r}")
    candidates = corpus.by_language[language]
    if not candidates:
        raise InsufficientCandidates(f"no suggestions for language {language!r}")
    class_index = int(emotion)  # anger 0, fear 1, sadness 2 in both schemes
    scored = [
        Recommendation(suggestion=s, score=float(rec_forward(model, tokenize(s.text, s.language))[class_index]))
        for s in candidates
    ]
    scored.sort(key=lambda r: (-r.score, r.suggestion.id))
    return RecommendationResult(recommendations=scored[:k], truncated=len(scored) < k)


# -- checkpointing -----------------------------------------------------------
#
# The embedding table travels inside the checkpoint so inference needs no
# side files: the matrix as a plain tensor and the vocabulary as UTF-8 bytes
# widened to float64 (values 0..255 round-trip exactly).

def save_rec_checkpoint(path: str, model: RecModel) -> None:
    record = dict(model.params)
    record["embedding.vectors"] = model.embeddings.vectors
    tokens = "\n".join(
        sorted(model.embeddings.vocab, key=model.embeddings.vocab.__getitem__)
    )
    record["embedding.vocab_utf8"] = np.frombuffer(
        tokens.encode("utf-8"), dtype=np.uint8
    ).astype(np.float64)
    nn.save_checkpoint(path, "REC", record)


def load_rec_checkpoint(path: str) -> RecModel:
    kind, record = nn.load_checkpoint(path)
    if kind != "REC":
        raise CheckpointError(f"expected a REC checkpoint, found {kind}")
    try:
        vectors = record.pop("embedding.vectors")
        vocab_bytes = record.pop("embedding.vocab_utf8")
    except KeyError as missing:
        raise CheckpointError(f"checkpoint lacks record {missing}") from None
    tokens = bytes(vocab_bytes.astype(np.uint8)).decode("utf-8").split("\n")
    if len(tokens) != vectors.shape[0]:
        raise CheckpointError("vocabulary size disagrees with the vector matrix")
    table = EmbeddingTable(vocab={t: i for i, t in enumerate(tokens)}, vectors=vectors)
    return RecModel(params=record, embeddings=table)


def default_embeddings_path() -> Path:
    """The small word-vector table shipped with the package."""
    return Path(__file__).parent / "data" / "mini_embeddings.txt"


def default_corpus_path() -> Path:
    """The shipped bilingual seed corpus."""
    return Path(__file__).parent / "data" / "seed_corpus.jsonl"
