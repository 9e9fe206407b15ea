"""Hand-written forward/backward pairs for the feed-forward layers.

Every backward computes exact gradients of its forward map; there is no
autodiff graph. Arrays are float64 throughout so finite-difference checks
resolve cleanly.
"""

from __future__ import annotations

import numpy as np

from ..errors import LabelOutOfRange, OddSpatialDim, ShapeMismatch
from ..rng import Rng


def glorot_uniform(rng: Rng, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, shape)


def _im2col(padded: np.ndarray, height: int, width: int) -> np.ndarray:
    """Stack 3x3 neighborhoods: (C_in*9, H*W), ordered (channel, ki, kj)."""
    c_in = padded.shape[0]
    cols = np.empty((c_in, 3, 3, height * width))
    for ki in range(3):
        for kj in range(3):
            cols[:, ki, kj, :] = padded[:, ki : ki + height, kj : kj + width].reshape(
                c_in, height * width
            )
    return cols.reshape(c_in * 9, height * width)


def conv2d_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """3x3 same-padding cross-correlation plus bias.

    x: (C_in, H, W); w: (C_out, C_in, 3, 3); b: (C_out,). Output (C_out, H, W).
    """
    if x.ndim != 3 or w.ndim != 4 or w.shape[2:] != (3, 3):
        raise ShapeMismatch("conv2d expects x (C,H,W) and w (C_out,C_in,3,3)")
    if w.shape[1] != x.shape[0] or b.shape != (w.shape[0],):
        raise ShapeMismatch(
            f"conv2d shapes inconsistent: x {x.shape}, w {w.shape}, b {b.shape}"
        )
    c_out = w.shape[0]
    _, h, width = x.shape
    padded = np.zeros((x.shape[0], h + 2, width + 2))
    padded[:, 1:-1, 1:-1] = x
    cols = _im2col(padded, h, width)
    out = w.reshape(c_out, -1) @ cols + b[:, None]
    return out.reshape(c_out, h, width)


def conv2d_backward(
    grad_out: np.ndarray, x: np.ndarray, w: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of conv2d_forward w.r.t. input, weights, and bias."""
    c_out = w.shape[0]
    c_in, h, width = x.shape
    if grad_out.shape != (c_out, h, width):
        raise ShapeMismatch("grad_out shape disagrees with the forward output")
    padded = np.zeros((c_in, h + 2, width + 2))
    padded[:, 1:-1, 1:-1] = x
    cols = _im2col(padded, h, width)

    go = grad_out.reshape(c_out, -1)
    grad_b = go.sum(axis=1)
    grad_w = (go @ cols.T).reshape(w.shape)

    grad_cols = (w.reshape(c_out, -1).T @ go).reshape(c_in, 3, 3, h * width)
    grad_padded = np.zeros_like(padded)
    for ki in range(3):
        for kj in range(3):
            grad_padded[:, ki : ki + h, kj : kj + width] += grad_cols[:, ki, kj, :].reshape(
                c_in, h, width
            )
    return grad_padded[:, 1:-1, 1:-1], grad_w, grad_b


def maxpool2d_forward(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """2x2 max-pool with stride 2; returns (output, argmax indices).

    Argmax is the position within each window, flattened row-major, with ties
    broken toward the smallest index.
    """
    if x.ndim != 3:
        raise ShapeMismatch("maxpool2d expects (C, H, W)")
    c, h, w = x.shape
    if h % 2 != 0 or w % 2 != 0:
        raise OddSpatialDim(f"spatial dims must be even, got {h}x{w}")
    windows = x.reshape(c, h // 2, 2, w // 2, 2).transpose(0, 1, 3, 2, 4).reshape(
        c, h // 2, w // 2, 4
    )
    argmax = windows.argmax(axis=3)  # first occurrence = smallest flat index
    out = np.take_along_axis(windows, argmax[..., None], axis=3)[..., 0]
    return out, argmax


def maxpool2d_backward(grad_out: np.ndarray, argmax: np.ndarray, in_shape: tuple[int, int, int]) -> np.ndarray:
    """Route each output gradient to its argmax position."""
    c, h, w = in_shape
    if grad_out.shape != (c, h // 2, w // 2):
        raise ShapeMismatch("grad_out shape disagrees with the pooled output")
    grad_windows = np.zeros((c, h // 2, w // 2, 4))
    np.put_along_axis(grad_windows, argmax[..., None], grad_out[..., None], axis=3)
    return (
        grad_windows.reshape(c, h // 2, w // 2, 2, 2)
        .transpose(0, 1, 3, 2, 4)
        .reshape(c, h, w)
    )


def dense_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """W x + b for a single input vector."""
    if w.ndim != 2 or x.shape != (w.shape[1],) or b.shape != (w.shape[0],):
        raise ShapeMismatch(
            f"dense shapes inconsistent: x {x.shape}, w {w.shape}, b {b.shape}"
        )
    return w @ x + b


def dense_backward(
    grad_out: np.ndarray, x: np.ndarray, w: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of dense_forward w.r.t. input, weights, and bias."""
    if grad_out.shape != (w.shape[0],):
        raise ShapeMismatch("grad_out length disagrees with the layer width")
    return w.T @ grad_out, np.outer(grad_out, x), grad_out.copy()


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(grad_out: np.ndarray, x: np.ndarray) -> np.ndarray:
    # subgradient 0 at exactly 0
    return grad_out * (x > 0.0)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Numerically stable softmax over a vector."""
    shifted = logits - logits.max()
    e = np.exp(shifted)
    return e / e.sum()


def softmax_cross_entropy(logits: np.ndarray, label: int) -> tuple[float, np.ndarray]:
    """Loss -log softmax(logits)[label] and its gradient w.r.t. the logits."""
    k = len(logits)
    if not 0 <= label < k:
        raise LabelOutOfRange(f"label {label} outside [0, {k})")
    m = logits.max()
    lse = m + np.log(np.exp(logits - m).sum())
    loss = lse - logits[label]
    grad = softmax(logits)
    grad[label] -= 1.0
    return float(loss), grad
