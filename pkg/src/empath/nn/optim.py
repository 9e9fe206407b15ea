"""Adam optimizer over named parameter dicts, and the gradient checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import ShapeMismatch

Params = dict[str, np.ndarray]


@dataclass
class AdamState:
    """First/second moment accumulators plus the step counter."""

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m: Params = field(default_factory=dict)
    v: Params = field(default_factory=dict)


def adam_update(params: Params, grads: Params, state: AdamState) -> tuple[Params, AdamState]:
    """One bias-corrected Adam step, applied in place; returns both for chaining."""
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ShapeMismatch(f"gradient for {name} has shape {g.shape}, want {p.shape}")
        m = state.m.setdefault(name, np.zeros_like(p))
        v = state.v.setdefault(name, np.zeros_like(p))
        m += (1.0 - b1) * (g - m)
        v += (1.0 - b2) * (g * g - v)
        m_hat = m / (1.0 - b1**state.t)
        v_hat = v / (1.0 - b2**state.t)
        p -= state.lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return params, state


def gradient_check(
    loss_fn: Callable[[Params], tuple[float, Params]],
    params: Params,
    eps: float = 1e-3,
    loss_only: Callable[[Params], float] | None = None,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    loss_fn maps the parameter dict to (scalar loss, gradient dict) and must
    be deterministic. Relative error per coordinate is
    |a - n| / max(|a|, |n|, 1e-8). A cheaper loss-only callable may be
    supplied for the perturbed evaluations.
    """
    _, analytic = loss_fn(params)
    if loss_only is None:
        loss_only = lambda p: loss_fn(p)[0]  # noqa: E731
    worst = 0.0
    for name, p in params.items():
        flat = p.reshape(-1)
        grad_flat = analytic[name].reshape(-1)
        for idx in range(flat.size):
            original = flat[idx]
            flat[idx] = original + eps
            loss_plus = loss_only(params)
            flat[idx] = original - eps
            loss_minus = loss_only(params)
            flat[idx] = original
            numeric = (loss_plus - loss_minus) / (2.0 * eps)
            denom = max(abs(grad_flat[idx]), abs(numeric), 1e-8)
            worst = max(worst, abs(grad_flat[idx] - numeric) / denom)
    return worst
