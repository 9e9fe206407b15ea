"""Shared oracles and constructions used across the test modules."""

from __future__ import annotations

import numpy as np

from empath import nn
from empath.recommend import Suggestion, SuggestionCorpus
from empath.rng import Rng
from empath.ser import Emotion, build_ser_model

# The nine sentences the recommender must surface for English queries.
TABLE_I = {
    Emotion.ANGER: {
        "Take a deep breath",
        "Talk to a supportive friend",
        "Listen to calming music",
    },
    Emotion.SADNESS: {
        "Take a walk",
        "Make a list of things you're grateful for",
        "Think of the people you love",
    },
    Emotion.FEAR: {
        "Think about the times you have overcome fear",
        "Channel fear into positive actions",
        "In case things get out of hand, make an emergency call",
    },
}


def naive_dft(frame: np.ndarray) -> np.ndarray:
    """O(N^2) one-sided DFT, the independent oracle for fft_real."""
    n = len(frame)
    out = np.zeros(n // 2 + 1, dtype=complex)
    for k in range(n // 2 + 1):
        angles = -2.0j * np.pi * k * np.arange(n) / n
        out[k] = np.sum(frame * np.exp(angles))
    return out


def kink_free_ser_setup(seed: int, height: int, width: int):
    """SER model + input where no ReLU kink or pooling tie sits within the
    finite-difference step.

    Strictly positive fan-in-scaled weights over a strictly positive ramped
    input keep every pre-activation bounded away from zero; a deterministic
    ramp over the kernel taps gives every pool window a structurally unique
    maximum. Margins are audited by ser_operating_margins.
    """
    model = build_ser_model(seed=seed)
    rng = Rng(seed).split("gradcheck")
    tap_ramp = 0.4 + 0.2 * np.arange(9, dtype=float).reshape(3, 3)
    for idx, (c_in, c_out) in enumerate(((1, 16), (16, 32), (32, 64)), start=1):
        fan = c_in * 9
        model.params[f"conv{idx}.w"] = (
            tap_ramp[None, None] + rng.uniform(0.0, 0.05, (c_out, c_in, 3, 3))
        ) / fan
        model.params[f"conv{idx}.b"] = rng.uniform(0.05, 0.1, (c_out,))
    model.params["out.w"] = rng.uniform(-1.0, 1.0, (6, 64))
    rows, cols = np.indices((height, width))
    x = 0.5 + 0.05 * cols + 0.23 * rows + rng.uniform(0.0, 0.004, (height, width))
    return model, x


def ser_operating_margins(params: dict, x: np.ndarray) -> tuple[float, float]:
    """(min |pre-activation|, min pool-window gap) along the conv stack."""
    a = x[None]
    min_pre, min_gap = np.inf, np.inf
    for idx in range(1, 4):
        pre = nn.conv2d_forward(a, params[f"conv{idx}.w"], params[f"conv{idx}.b"])
        min_pre = min(min_pre, float(np.abs(pre).min()))
        act = nn.relu(pre)
        c, h, w = act.shape
        act = act[:, : h - h % 2, : w - w % 2]
        windows = (
            act.reshape(c, act.shape[1] // 2, 2, act.shape[2] // 2, 2)
            .transpose(0, 1, 3, 2, 4)
            .reshape(c, -1, 4)
        )
        ordered = np.sort(windows, axis=2)
        min_gap = min(min_gap, float((ordered[:, :, 3] - ordered[:, :, 2]).min()))
        a, _ = nn.maxpool2d_forward(act)
    return min_pre, min_gap


def layer_gradient_errors(eps: float = 1e-3) -> dict[str, float]:
    """Finite-difference error per layer, measured away from kinks and ties."""
    from empath.nn.optim import gradient_check

    errors: dict[str, float] = {}
    rng = Rng(5)

    x = rng.uniform(-1, 1, (2, 4, 4))
    proj = rng.uniform(-1, 1, (3, 4, 4))
    conv_params = {"w": rng.uniform(-0.5, 0.5, (3, 2, 3, 3)),
                   "b": rng.uniform(-0.5, 0.5, (3,)), "x": x}

    def conv_loss(p):
        out = nn.conv2d_forward(p["x"], p["w"], p["b"])
        gx, gw, gb = nn.conv2d_backward(proj, p["x"], p["w"])
        return float((out * proj).sum()), {"w": gw, "b": gb, "x": gx}

    errors["conv2d"] = gradient_check(conv_loss, conv_params, eps)

    pool_x = rng.uniform(-1, 1, (2, 4, 4))
    pool_proj = rng.uniform(-1, 1, (2, 2, 2))

    def pool_loss(p):
        out, argmax = nn.maxpool2d_forward(p["x"])
        return float((out * pool_proj).sum()), {
            "x": nn.maxpool2d_backward(pool_proj, argmax, p["x"].shape)
        }

    errors["maxpool2d"] = gradient_check(pool_loss, {"x": pool_x}, eps)

    dense_proj = rng.uniform(-1, 1, (3,))
    dense_params = {"w": rng.uniform(-1, 1, (3, 5)), "b": rng.uniform(-1, 1, (3,)),
                    "x": rng.uniform(-1, 1, (5,))}

    def dense_loss(p):
        out = nn.dense_forward(p["x"], p["w"], p["b"])
        gx, gw, gb = nn.dense_backward(dense_proj, p["x"], p["w"])
        return float((out * dense_proj).sum()), {"w": gw, "b": gb, "x": gx}

    errors["dense"] = gradient_check(dense_loss, dense_params, eps)

    relu_x = rng.uniform(0.2, 1.0, (6,)) * np.array([-1, 1, -1, 1, -1, 1], dtype=float)
    relu_proj = rng.uniform(-1, 1, (6,))

    def relu_loss(p):
        return float((nn.relu(p["x"]) * relu_proj).sum()), {
            "x": nn.relu_backward(relu_proj, p["x"])
        }

    errors["relu"] = gradient_check(relu_loss, {"x": relu_x}, eps)

    lstm_init = nn.init_lstm(Rng(12), 4, 3)
    lstm_inputs = rng.uniform(-1, 1, (3, 4))
    lstm_proj = rng.uniform(-1, 1, (3, 3))
    lstm_params = {"w_x": lstm_init.w_x, "w_h": lstm_init.w_h, "b": lstm_init.b,
                   "inp": lstm_inputs}

    def lstm_loss(p):
        lp = nn.LstmParams(w_x=p["w_x"], w_h=p["w_h"], b=p["b"])
        hiddens, cache = nn.lstm_forward(p["inp"], lp)
        gi, gwx, gwh, gb = nn.lstm_backward(lstm_proj, cache)
        return float((hiddens * lstm_proj).sum()), {"w_x": gwx, "w_h": gwh, "b": gb, "inp": gi}

    errors["lstm"] = gradient_check(lstm_loss, lstm_params, eps)

    emb_idx = [0, 3, 0, 5]
    emb_proj = rng.uniform(-1, 1, (4, 3))

    def emb_loss(p):
        seq = nn.embedding_lookup(p["t"], emb_idx)
        return float((seq * emb_proj).sum()), {
            "t": nn.embedding_backward(emb_proj, p["t"].shape, emb_idx)
        }

    errors["embedding"] = gradient_check(emb_loss, {"t": rng.uniform(-1, 1, (5, 3))}, eps)

    def ce_loss(p):
        value, grad = nn.softmax_cross_entropy(p["z"], 4)
        return value, {"z": grad}

    errors["softmax_ce"] = gradient_check(ce_loss, {"z": rng.uniform(-2, 2, (6,))}, eps)
    return errors


# Ten keywords per class from the shipped vocabulary, one per toy suggestion.
_TOY_KEYWORDS = {
    "anger": ["deep", "breath", "talk", "supportive", "friend", "listen", "calming",
              "music", "نفس", "عمیق"],
    "fear": ["times", "overcome", "fear", "channel", "positive", "actions", "case",
             "hand", "emergency", "call"],
    "sadness": ["walk", "list", "grateful", "youre", "people", "love", "قدم",
                "فهرستی", "چیزهای", "خوب"],
}


def toy_rec_corpus() -> SuggestionCorpus:
    """30 suggestions, 10 per negative emotion, each with a distinct keyword."""
    suggestions = []
    for emotion, keywords in _TOY_KEYWORDS.items():
        for i, keyword in enumerate(keywords, start=1):
            lang = "fa" if any("؀" <= ch <= "ۿ" for ch in keyword) else "en"
            filler = "حالا" if lang == "fa" else "now"
            suggestions.append(
                Suggestion(
                    id=f"toy-{emotion[:3]}-{i:02d}",
                    emotion=emotion,
                    language=lang,
                    text=f"{keyword} {filler}",
                )
            )
    return SuggestionCorpus(suggestions=suggestions)
